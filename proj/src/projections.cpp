#include "swcca/projections.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

namespace swcca {

namespace {

// Keys are (|z_i|, index); a key ranks ahead of another when its magnitude is
// larger, or equal with a lower index. Total order, so selection results are
// deterministic.
struct AbsKey {
  double mag;
  Eigen::Index idx;
};

bool ranks_before(const AbsKey& a, const AbsKey& b) {
  if (a.mag != b.mag) return a.mag > b.mag;
  return a.idx < b.idx;
}

// Median-of-three pivot: order first/middle/last, return the middle.
std::size_t median_of_three(std::vector<AbsKey>& keys, std::size_t lo, std::size_t hi) {
  const std::size_t mid = lo + (hi - lo) / 2;
  if (ranks_before(keys[mid], keys[lo])) std::swap(keys[lo], keys[mid]);
  if (ranks_before(keys[hi], keys[lo])) std::swap(keys[lo], keys[hi]);
  if (ranks_before(keys[hi], keys[mid])) std::swap(keys[mid], keys[hi]);
  return mid;
}

constexpr std::size_t kSortFallback = 64;

// Partition keys[lo..hi] so the strongest k keys occupy keys[0..k-1].
void quickselect_top(std::vector<AbsKey>& keys, std::size_t k) {
  std::size_t lo = 0;
  std::size_t hi = keys.size() - 1;
  while (true) {
    if (hi - lo + 1 <= kSortFallback) {
      std::sort(keys.begin() + lo, keys.begin() + hi + 1, ranks_before);
      return;
    }
    const std::size_t pivot_at = median_of_three(keys, lo, hi);
    std::swap(keys[pivot_at], keys[hi]);
    const AbsKey pivot = keys[hi];
    std::size_t store = lo;
    for (std::size_t i = lo; i < hi; ++i) {
      if (ranks_before(keys[i], pivot)) std::swap(keys[store++], keys[i]);
    }
    std::swap(keys[store], keys[hi]);
    if (store == k || store + 1 == k) return;
    if (store > k) hi = store - 1;
    else lo = store + 1;
  }
}

}  // namespace

TopKSelection top_k_support(const Eigen::VectorXd& z, Eigen::Index k) {
  const Eigen::Index n = z.size();
  if (k < 1 || k > n) {
    std::ostringstream msg;
    msg << "k = " << k << " out of range for vector of length " << n;
    throw InvalidK(msg.str());
  }
  std::vector<AbsKey> keys(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) keys[static_cast<std::size_t>(i)] = {std::abs(z[i]), i};
  quickselect_top(keys, static_cast<std::size_t>(k));

  TopKSelection sel;
  sel.indices.resize(static_cast<std::size_t>(k));
  sel.threshold_magnitude = keys[0].mag;
  for (Eigen::Index i = 0; i < k; ++i) {
    sel.indices[static_cast<std::size_t>(i)] = keys[static_cast<std::size_t>(i)].idx;
    sel.threshold_magnitude = std::min(sel.threshold_magnitude, keys[static_cast<std::size_t>(i)].mag);
  }
  std::sort(sel.indices.begin(), sel.indices.end());
  return sel;
}

CanonicalVector hard_project(const Eigen::VectorXd& z, Eigen::Index k) {
  const TopKSelection sel = top_k_support(z, k);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(z.size());
  for (Eigen::Index i : sel.indices) out[i] = z[i];
  const double norm = out.norm();
  if (norm == 0.0)
    throw ZeroProjection("hard_project: retained entries are all zero");
  return CanonicalVector(out / norm);
}

CanonicalVector soft_threshold_project(const Eigen::VectorXd& z, double lambda) {
  if (lambda < 0.0) throw InvalidArgument("soft_threshold_project: lambda must be >= 0");
  Eigen::VectorXd out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double shrunk = std::abs(z[i]) - lambda;
    out[i] = shrunk > 0.0 ? std::copysign(shrunk, z[i]) : 0.0;
  }
  const double norm = out.norm();
  if (norm == 0.0)
    throw ZeroProjection("soft_threshold_project: lambda >= max|z_i| kills every entry");
  return CanonicalVector(out / norm);
}

CanonicalVector group_shrink_project(const Eigen::VectorXd& z, double lambda,
                                     const std::vector<std::vector<Eigen::Index>>& groups) {
  if (lambda < 0.0) throw InvalidArgument("group_shrink_project: lambda must be >= 0");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(z.size());
  for (const auto& group : groups) {
    double sq = 0.0;
    for (Eigen::Index i : group) sq += z[i] * z[i];
    const double gnorm = std::sqrt(sq);
    if (gnorm > lambda) {
      const double scale = 1.0 - lambda / gnorm;
      for (Eigen::Index i : group) out[i] = scale * z[i];
    }
  }
  const double norm = out.norm();
  if (norm == 0.0)
    throw ZeroProjection("group_shrink_project: every group is at or below lambda");
  return CanonicalVector(out / norm);
}

void validate_penalty(const PenaltySpec& penalty, Eigen::Index length) {
  if (const auto* hard = std::get_if<HardCardinality>(&penalty)) {
    if (hard->k < 1 || hard->k > length) {
      std::ostringstream msg;
      msg << "cardinality bound " << hard->k << " out of range for length " << length;
      throw InvalidK(msg.str());
    }
    return;
  }
  if (const auto* lasso = std::get_if<Lasso>(&penalty)) {
    if (lasso->lambda < 0.0) throw InvalidArgument("lasso lambda must be >= 0");
    return;
  }
  const auto& gl = std::get<GroupLasso>(penalty);
  if (gl.lambda < 0.0) throw InvalidArgument("group lasso lambda must be >= 0");
  std::vector<bool> seen(static_cast<std::size_t>(length), false);
  Eigen::Index covered = 0;
  for (const auto& group : gl.groups) {
    if (group.empty()) throw InvalidArgument("group lasso: empty group");
    for (Eigen::Index i : group) {
      if (i < 0 || i >= length) throw InvalidArgument("group lasso: index out of range");
      if (seen[static_cast<std::size_t>(i)])
        throw InvalidArgument("group lasso: groups overlap");
      seen[static_cast<std::size_t>(i)] = true;
      ++covered;
    }
  }
  if (covered != length)
    throw InvalidArgument("group lasso: groups must cover every index");
}

double penalty_value(const PenaltySpec& penalty, const Eigen::VectorXd& x) {
  if (std::holds_alternative<HardCardinality>(penalty)) return 0.0;
  if (const auto* lasso = std::get_if<Lasso>(&penalty))
    return lasso->lambda * x.lpNorm<1>();
  const auto& gl = std::get<GroupLasso>(penalty);
  double total = 0.0;
  for (const auto& group : gl.groups) {
    double sq = 0.0;
    for (Eigen::Index i : group) sq += x[i] * x[i];
    total += std::sqrt(sq);
  }
  return gl.lambda * total;
}

CanonicalVector apply_penalty(const PenaltySpec& penalty, const Eigen::VectorXd& z) {
  if (const auto* hard = std::get_if<HardCardinality>(&penalty))
    return hard_project(z, hard->k);
  if (const auto* lasso = std::get_if<Lasso>(&penalty))
    return soft_threshold_project(z, lasso->lambda);
  const auto& gl = std::get<GroupLasso>(penalty);
  return group_shrink_project(z, gl.lambda, gl.groups);
}

}  // namespace swcca

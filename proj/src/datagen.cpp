#include "swcca/datagen.hpp"

#include <algorithm>

#include "swcca/rng.hpp"

namespace swcca {

namespace {

std::vector<Eigen::Index> nonzero_indices(const Eigen::VectorXd& v) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) idx.push_back(i);
  return idx;
}

}  // namespace

SyntheticData generate_synthetic_1(std::uint64_t seed, double noise_scale) {
  constexpr Eigen::Index n = 50, p = 100, q = 80;

  Eigen::VectorXd u = Eigen::VectorXd::Zero(p);
  u.head(30).setOnes();

  RandomStream v_stream(seed, 0);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(q);
  v.head(20) = v_stream.normal_vector(20);
  v.segment(40, 10) = v_stream.normal_vector(10);

  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  w.head(30).setOnes();

  RandomStream x_stream(seed, 1);
  RandomStream y_stream(seed, 2);
  Eigen::MatrixXd X = w * u.transpose() + noise_scale * x_stream.normal_matrix(n, p);
  Eigen::MatrixXd Y = w * v.transpose() + noise_scale * y_stream.normal_matrix(n, q);

  SyntheticTruth truth{u, v, w, nonzero_indices(u), nonzero_indices(v), nonzero_indices(w), seed};
  return SyntheticData{DataMatrix(std::move(X)), DataMatrix(std::move(Y)), std::move(truth)};
}

SyntheticData generate_synthetic_2(std::uint64_t seed, double noise_scale) {
  constexpr Eigen::Index n = 50, p = 100, q = 80;

  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, p);
  Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(n, q);
  X.block(0, 0, 30, 50).setOnes();
  Y.block(0, 0, 30, 40).setConstant(-1.0);

  RandomStream x_stream(seed, 1);
  RandomStream y_stream(seed, 2);
  X += noise_scale * x_stream.normal_matrix(n, p);
  Y += noise_scale * y_stream.normal_matrix(n, q);

  Eigen::VectorXd u = Eigen::VectorXd::Zero(p);
  u.head(50).setOnes();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(q);
  v.head(40).setConstant(-1.0);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  w.head(30).setOnes();

  SyntheticTruth truth{u, v, w, nonzero_indices(u), nonzero_indices(v), nonzero_indices(w), seed};
  return SyntheticData{DataMatrix(std::move(X)), DataMatrix(std::move(Y)), std::move(truth)};
}

RecoveryScore support_recovery(const CanonicalVector& estimated,
                               const std::vector<Eigen::Index>& truth_support) {
  const std::vector<Eigen::Index> est = estimated.support();
  for (Eigen::Index i : truth_support)
    if (i < 0 || i >= estimated.size())
      throw DimensionMismatch("support_recovery: truth index out of range");

  if (est.empty() && truth_support.empty()) return {1.0, 1.0, 1.0};
  if (est.empty() || truth_support.empty()) return {0.0, 0.0, 0.0};

  std::vector<Eigen::Index> truth_sorted = truth_support;
  std::sort(truth_sorted.begin(), truth_sorted.end());
  std::size_t hits = 0;
  for (Eigen::Index i : est)
    if (std::binary_search(truth_sorted.begin(), truth_sorted.end(), i)) ++hits;

  const double precision = static_cast<double>(hits) / static_cast<double>(est.size());
  const double recall = static_cast<double>(hits) / static_cast<double>(truth_sorted.size());
  const double f1 =
      hits == 0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
  return {precision, recall, f1};
}

}  // namespace swcca

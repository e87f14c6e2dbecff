#include "swcca/baselines.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "swcca/projections.hpp"
#include "swcca/rng.hpp"

namespace swcca {

namespace {

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& z, double lambda) {
  Eigen::VectorXd out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double shrunk = std::abs(z[i]) - lambda;
    out[i] = shrunk > 0.0 ? std::copysign(shrunk, z[i]) : 0.0;
  }
  return out;
}

void power_iteration_pair(const DataMatrix& X, const DataMatrix& Y,
                          Eigen::VectorXd& u, Eigen::VectorXd& v) {
  v = Eigen::VectorXd::Constant(Y.p(), 1.0 / std::sqrt(static_cast<double>(Y.p())));
  u = Eigen::VectorXd::Constant(X.p(), 1.0 / std::sqrt(static_cast<double>(X.p())));
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::VectorXd u_next = X.values().transpose() * (Y.values() * v);
    double norm = u_next.norm();
    if (norm == 0.0) return;
    u_next /= norm;
    Eigen::VectorXd v_next = Y.values().transpose() * (X.values() * u_next);
    norm = v_next.norm();
    if (norm == 0.0) return;
    v_next /= norm;
    const double delta = (u_next - u).squaredNorm() + (v_next - v).squaredNorm();
    u = u_next;
    v = v_next;
    if (delta < 1e-16) break;
  }
}

struct ScaledPair {
  CanonicalVector u;
  CanonicalVector v;
};

ScaledPair initial_uv(const DataMatrix& X, const DataMatrix& Y, Eigen::Index k_u,
                      Eigen::Index k_v, const SolverConfig& config, int restart) {
  const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(restart);
  switch (config.init) {
    case InitPolicy::kRandomUnit: {
      RandomStream su(seed, 0), sv(seed, 1);
      return {hard_project(su.normal_vector(X.p()), k_u),
              hard_project(sv.normal_vector(Y.p()), k_v)};
    }
    case InitPolicy::kSvdWarmStart: {
      Eigen::VectorXd u_warm, v_warm;
      power_iteration_pair(X, Y, u_warm, v_warm);
      return {hard_project(u_warm, k_u), hard_project(v_warm, k_v)};
    }
    case InitPolicy::kSupplied:
      if (!config.u0 || !config.v0)
        throw InvalidArgument("fit_l0_scca: supplied init requires u0 and v0");
      return {hard_project(*config.u0, k_u), hard_project(*config.v0, k_v)};
  }
  throw InvalidArgument("unknown init policy");
}

BaselineFit l0_scca_single(const DataMatrix& X, const DataMatrix& Y, Eigen::Index k_u,
                           Eigen::Index k_v, const SolverConfig& config, int restart) {
  ScaledPair state = initial_uv(X, Y, k_u, k_v, config, restart);
  CanonicalVector u = std::move(state.u);
  CanonicalVector v = std::move(state.v);

  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
  for (int sweep = 1; sweep <= config.max_iters; ++sweep) {
    CanonicalVector u_next =
        hard_project(X.values().transpose() * (Y.values() * v.entries()), k_u);
    CanonicalVector v_next =
        hard_project(Y.values().transpose() * (X.values() * u_next.entries()), k_v);
    trace.push_back(u_next.entries().dot(X.values().transpose() *
                                         (Y.values() * v_next.entries())));
    iterations = sweep;
    const double du = (u_next.entries() - u.entries()).squaredNorm();
    const double dv = (v_next.entries() - v.entries()).squaredNorm();
    u = std::move(u_next);
    v = std::move(v_next);
    if (du < config.delta_tol && dv < config.delta_tol) {
      converged = true;
      break;
    }
  }
  return BaselineFit{std::move(u), std::move(v), std::move(trace), iterations, converged};
}

}  // namespace

BaselineFit fit_l0_scca(const DataMatrix& X, const DataMatrix& Y, Eigen::Index k_u,
                        Eigen::Index k_v, const SolverConfig& config) {
  if (X.n() != Y.n()) throw DimensionMismatch("X and Y must share the sample count");
  if (k_u < 1 || k_u > X.p() || k_v < 1 || k_v > Y.p())
    throw InvalidK("fit_l0_scca: cardinality bound out of range");
  if (config.max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
  if (config.restarts > 1 && config.init != InitPolicy::kRandomUnit)
    throw InvalidArgument("restarts > 1 requires random_unit initialization");

  std::optional<BaselineFit> best;
  std::optional<ZeroProjection> first_failure;
  for (int restart = 0; restart < config.restarts; ++restart) {
    try {
      BaselineFit candidate = l0_scca_single(X, Y, k_u, k_v, config, restart);
      if (!best || candidate.objective_trace.back() > best->objective_trace.back())
        best = std::move(candidate);
    } catch (const ZeroProjection& e) {
      if (config.restarts == 1) throw;
      if (!first_failure) first_failure = e;
    }
  }
  if (!best) throw *first_failure;
  return std::move(*best);
}

CanonicalVector l1_ball_project(const Eigen::VectorXd& z, double radius) {
  if (radius < 1.0)
    throw InfeasibleRadius("L1 radius below 1 cannot meet the unit L2 sphere");
  const double norm = z.norm();
  if (norm == 0.0) throw ZeroProjection("l1_ball_project: zero input");
  Eigen::VectorXd unit = z / norm;
  if (unit.lpNorm<1>() <= radius) return CanonicalVector(std::move(unit));

  // ||S_lam(z)||_1 / ||S_lam(z)||_2 decreases in lam, hitting 1 as lam
  // approaches max|z_i|; bisect for the radius.
  double lo = 0.0;
  double hi = z.cwiseAbs().maxCoeff();
  for (int iter = 0; iter < 100; ++iter) {
    const double lam = 0.5 * (lo + hi);
    const Eigen::VectorXd s = soft_threshold(z, lam);
    const double s_norm = s.norm();
    if (s_norm == 0.0) {
      hi = lam;
      continue;
    }
    const double l1 = s.lpNorm<1>() / s_norm;
    if (l1 > radius) {
      lo = lam;
    } else {
      hi = lam;
    }
  }
  const Eigen::VectorXd s = soft_threshold(z, hi);
  const double s_norm = s.norm();
  if (s_norm == 0.0) throw ZeroProjection("l1_ball_project: shrinkage wiped out z");
  return CanonicalVector(s / s_norm);
}

BaselineFit fit_pmd(const DataMatrix& X, const DataMatrix& Y, const PmdConfig& config) {
  if (X.n() != Y.n()) throw DimensionMismatch("X and Y must share the sample count");
  if (config.c1 < 1.0 || config.c2 < 1.0)
    throw InfeasibleRadius("PMD radii must be >= 1");
  if (config.max_iters < 1) throw InvalidArgument("max_iters must be >= 1");

  const DataMatrix Xw = config.standardize ? standardize_columns(X) : X;
  const DataMatrix Yw = config.standardize ? standardize_columns(Y) : Y;

  Eigen::VectorXd u_warm, v_warm;
  power_iteration_pair(Xw, Yw, u_warm, v_warm);
  CanonicalVector u = l1_ball_project(u_warm, config.c1);
  CanonicalVector v = l1_ball_project(v_warm, config.c2);

  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
  for (int sweep = 1; sweep <= config.max_iters; ++sweep) {
    CanonicalVector u_next =
        l1_ball_project(Xw.values().transpose() * (Yw.values() * v.entries()), config.c1);
    CanonicalVector v_next =
        l1_ball_project(Yw.values().transpose() * (Xw.values() * u_next.entries()), config.c2);
    trace.push_back(u_next.entries().dot(Xw.values().transpose() *
                                         (Yw.values() * v_next.entries())));
    iterations = sweep;
    const double du = (u_next.entries() - u.entries()).squaredNorm();
    const double dv = (v_next.entries() - v.entries()).squaredNorm();
    u = std::move(u_next);
    v = std::move(v_next);
    if (du < config.tol && dv < config.tol) {
      converged = true;
      break;
    }
  }
  return BaselineFit{std::move(u), std::move(v), std::move(trace), iterations, converged};
}

}  // namespace swcca

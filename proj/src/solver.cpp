#include "swcca/solver.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "swcca/projections.hpp"
#include "swcca/rng.hpp"

namespace swcca {

namespace {

Eigen::VectorXd uniform_weights(Eigen::Index n) {
  return Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
}

void validate_config(const SolverConfig& config) {
  if (config.max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
  if (config.restarts < 1) throw InvalidArgument("restarts must be >= 1");
  if (config.delta_tol < 0.0 || config.objective_tol < 0.0)
    throw InvalidArgument("tolerances must be >= 0");
  if (config.restarts > 1 && config.init != InitPolicy::kRandomUnit)
    throw InvalidArgument("restarts > 1 requires random_unit initialization");
  if (config.init == InitPolicy::kSupplied) {
    if (!config.u0 || !config.v0 || (!config.w0 && !config.freeze_w))
      throw InvalidArgument("supplied initialization requires u0, v0 and w0");
  }
}

// A few unpenalized power-iteration sweeps on X^T Y via factored mat-vecs.
void warm_start_pair(const DataMatrix& X, const DataMatrix& Y,
                     Eigen::VectorXd& u, Eigen::VectorXd& v) {
  v = Eigen::VectorXd::Constant(Y.p(), 1.0 / std::sqrt(static_cast<double>(Y.p())));
  u = Eigen::VectorXd::Constant(X.p(), 1.0 / std::sqrt(static_cast<double>(X.p())));
  for (int iter = 0; iter < 100; ++iter) {
    Eigen::VectorXd u_next = X.values().transpose() * (Y.values() * v);
    double norm = u_next.norm();
    if (norm == 0.0) return;  // keep the flat start; projection decides
    u_next /= norm;
    Eigen::VectorXd v_next = Y.values().transpose() * (X.values() * u_next);
    norm = v_next.norm();
    if (norm == 0.0) return;
    v_next /= norm;
    const double delta = (u_next - u).squaredNorm() + (v_next - v).squaredNorm();
    u = u_next;
    v = v_next;
    if (delta < 1e-14) break;
  }
}

double penalized_objective(const SwccaProblem& problem, const CanonicalVector& u,
                           const CanonicalVector& v, const CanonicalVector& w) {
  const double raw = weighted_objective(problem.X, problem.Y, u, v, w);
  return raw - penalty_value(problem.penalty_u, u.entries()) -
         penalty_value(problem.penalty_v, v.entries()) -
         penalty_value(problem.penalty_w, w.entries());
}

SwccaFit run_single(const SwccaProblem& problem, const SolverConfig& config, int restart) {
  InitialTriple state = [&] {
    try {
      return initial_triple(problem, config, restart);
    } catch (const ZeroProjection& e) {
      throw ZeroProjection(std::string("initialization degenerated: ") + e.what(), 0);
    }
  }();
  CanonicalVector u = std::move(state.u);
  CanonicalVector v = std::move(state.v);
  CanonicalVector w = std::move(state.w);

  std::vector<double> trace;
  trace.reserve(16);
  int iterations = 0;
  bool converged = false;
  TerminationReason reason = TerminationReason::kMaxIters;

  for (int sweep = 1; sweep <= config.max_iters; ++sweep) {
    CanonicalVector u_next = [&] {
      try {
        return update_u(problem, v, w);
      } catch (const ZeroProjection& e) {
        throw ZeroProjection(std::string("u-update degenerated: ") + e.what(), sweep);
      }
    }();
    CanonicalVector v_next = [&] {
      try {
        return update_v(problem, u_next, w);
      } catch (const ZeroProjection& e) {
        throw ZeroProjection(std::string("v-update degenerated: ") + e.what(), sweep);
      }
    }();
    CanonicalVector w_next = [&]() -> CanonicalVector {
      if (config.freeze_w) return w;
      try {
        return update_w(problem, u_next, v_next);
      } catch (const ZeroProjection& e) {
        throw ZeroProjection(std::string("w-update degenerated: ") + e.what(), sweep);
      }
    }();

    const double objective = penalized_objective(problem, u_next, v_next, w_next);
    if (!std::isfinite(objective))
      throw NonFiniteValue("objective became non-finite during fit");
    trace.push_back(objective);
    iterations = sweep;

    const double du = (u_next.entries() - u.entries()).squaredNorm();
    const double dv = (v_next.entries() - v.entries()).squaredNorm();
    const double dw = (w_next.entries() - w.entries()).squaredNorm();
    u = std::move(u_next);
    v = std::move(v_next);
    w = std::move(w_next);

    if (du < config.delta_tol && dv < config.delta_tol && dw < config.delta_tol) {
      converged = true;
      reason = TerminationReason::kDeltaBelowTol;
      break;
    }
    if (config.objective_tol > 0.0 && trace.size() >= 2 &&
        std::abs(trace[trace.size() - 1] - trace[trace.size() - 2]) < config.objective_tol) {
      converged = true;
      reason = TerminationReason::kObjectiveDeltaBelowTol;
      break;
    }
  }

  return SwccaFit{std::move(u), std::move(v), std::move(w), std::move(trace),
                  iterations, converged, reason};
}

}  // namespace

void validate_problem(const SwccaProblem& problem) {
  if (problem.X.n() != problem.Y.n())
    throw DimensionMismatch("X and Y must share the sample count");
  validate_penalty(problem.penalty_u, problem.X.p());
  validate_penalty(problem.penalty_v, problem.Y.p());
  validate_penalty(problem.penalty_w, problem.X.n());
}

CanonicalVector update_u(const SwccaProblem& problem, const CanonicalVector& v,
                         const CanonicalVector& w) {
  if (v.size() != problem.Y.p() || w.size() != problem.X.n())
    throw DimensionMismatch("update_u: v/w lengths must match q/n");
  const Eigen::VectorXd t = (problem.Y.values() * v.entries()).cwiseProduct(w.entries());
  const Eigen::VectorXd z_u = problem.X.values().transpose() * t;
  return apply_penalty(problem.penalty_u, z_u);
}

CanonicalVector update_v(const SwccaProblem& problem, const CanonicalVector& u,
                         const CanonicalVector& w) {
  if (u.size() != problem.X.p() || w.size() != problem.X.n())
    throw DimensionMismatch("update_v: u/w lengths must match p/n");
  const Eigen::VectorXd t = (problem.X.values() * u.entries()).cwiseProduct(w.entries());
  const Eigen::VectorXd z_v = problem.Y.values().transpose() * t;
  return apply_penalty(problem.penalty_v, z_v);
}

CanonicalVector update_w(const SwccaProblem& problem, const CanonicalVector& u,
                         const CanonicalVector& v) {
  if (u.size() != problem.X.p() || v.size() != problem.Y.p())
    throw DimensionMismatch("update_w: u/v lengths must match p/q");
  const Eigen::VectorXd z_w =
      (problem.X.values() * u.entries()).cwiseProduct(problem.Y.values() * v.entries());
  return apply_penalty(problem.penalty_w, z_w);
}

InitialTriple initial_triple(const SwccaProblem& problem, const SolverConfig& config,
                             int restart) {
  const Eigen::Index p = problem.X.p();
  const Eigen::Index q = problem.Y.p();
  const Eigen::Index n = problem.X.n();
  const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(restart);

  auto project_w = [&](const Eigen::VectorXd& w_raw) -> CanonicalVector {
    if (config.freeze_w) return CanonicalVector(uniform_weights(n));
    return apply_penalty(problem.penalty_w, w_raw);
  };

  switch (config.init) {
    case InitPolicy::kRandomUnit: {
      RandomStream su(seed, 0), sv(seed, 1), sw(seed, 2);
      CanonicalVector u = apply_penalty(problem.penalty_u, su.normal_vector(p));
      CanonicalVector v = apply_penalty(problem.penalty_v, sv.normal_vector(q));
      CanonicalVector w = project_w(sw.normal_vector(n));
      return {std::move(u), std::move(v), std::move(w)};
    }
    case InitPolicy::kSvdWarmStart: {
      Eigen::VectorXd u_warm, v_warm;
      warm_start_pair(problem.X, problem.Y, u_warm, v_warm);
      CanonicalVector u = apply_penalty(problem.penalty_u, u_warm);
      CanonicalVector v = apply_penalty(problem.penalty_v, v_warm);
      CanonicalVector w = project_w(uniform_weights(n));
      return {std::move(u), std::move(v), std::move(w)};
    }
    case InitPolicy::kSupplied: {
      if (config.u0->size() != p || config.v0->size() != q ||
          (!config.freeze_w && config.w0->size() != n))
        throw DimensionMismatch("supplied initial vectors have wrong lengths");
      CanonicalVector u = apply_penalty(problem.penalty_u, *config.u0);
      CanonicalVector v = apply_penalty(problem.penalty_v, *config.v0);
      CanonicalVector w = config.freeze_w ? CanonicalVector(uniform_weights(n))
                                          : apply_penalty(problem.penalty_w, *config.w0);
      return {std::move(u), std::move(v), std::move(w)};
    }
  }
  throw InvalidArgument("unknown init policy");
}

SwccaFit fit(const SwccaProblem& problem, const SolverConfig& config) {
  validate_problem(problem);
  validate_config(config);

  std::optional<SwccaFit> best;
  std::optional<ZeroProjection> first_failure;
  for (int restart = 0; restart < config.restarts; ++restart) {
    try {
      SwccaFit candidate = run_single(problem, config, restart);
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

}  // namespace swcca

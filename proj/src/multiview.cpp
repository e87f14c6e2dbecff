#include "swcca/multiview.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "swcca/projections.hpp"
#include "swcca/rng.hpp"

namespace swcca {

namespace {

// Elementwise product of the cached projections, optionally skipping one view.
Eigen::VectorXd projection_product(const std::vector<Eigen::VectorXd>& proj,
                                   std::ptrdiff_t skip = -1) {
  Eigen::VectorXd prod = Eigen::VectorXd::Ones(proj.front().size());
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(proj.size()); ++j) {
    if (j == skip) continue;
    prod = prod.cwiseProduct(proj[static_cast<std::size_t>(j)]);
  }
  return prod;
}

std::vector<CanonicalVector> initial_us(const MultiviewProblem& problem,
                                        const SolverConfig& config,
                                        const std::optional<MultiviewInit>& supplied,
                                        int restart) {
  const std::size_t m = problem.views.size();
  const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(restart);
  std::vector<CanonicalVector> us;
  us.reserve(m);
  switch (config.init) {
    case InitPolicy::kRandomUnit:
      for (std::size_t i = 0; i < m; ++i) {
        RandomStream stream(seed, i);
        us.push_back(apply_penalty(problem.penalties[i],
                                   stream.normal_vector(problem.views[i].p())));
      }
      return us;
    case InitPolicy::kSvdWarmStart: {
      // Unpenalized product power iteration from flat vectors.
      std::vector<Eigen::VectorXd> warm(m);
      for (std::size_t i = 0; i < m; ++i)
        warm[i] = Eigen::VectorXd::Constant(
            problem.views[i].p(), 1.0 / std::sqrt(static_cast<double>(problem.views[i].p())));
      std::vector<Eigen::VectorXd> proj(m);
      for (std::size_t i = 0; i < m; ++i) proj[i] = problem.views[i].values() * warm[i];
      for (int iter = 0; iter < 100; ++iter) {
        double delta = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          Eigen::VectorXd z = problem.views[i].values().transpose() *
                              projection_product(proj, static_cast<std::ptrdiff_t>(i));
          const double norm = z.norm();
          if (norm == 0.0) break;
          z /= norm;
          delta += (z - warm[i]).squaredNorm();
          warm[i] = std::move(z);
          proj[i] = problem.views[i].values() * warm[i];
        }
        if (delta < 1e-14) break;
      }
      for (std::size_t i = 0; i < m; ++i)
        us.push_back(apply_penalty(problem.penalties[i], warm[i]));
      return us;
    }
    case InitPolicy::kSupplied:
      if (!supplied || supplied->us.size() != m)
        throw InvalidArgument("fit_multiview: supplied init must carry one u per view");
      for (std::size_t i = 0; i < m; ++i)
        us.push_back(apply_penalty(problem.penalties[i], supplied->us[i]));
      return us;
  }
  throw InvalidArgument("unknown init policy");
}

CanonicalVector initial_w(const MultiviewProblem& problem, const SolverConfig& config,
                          const std::optional<MultiviewInit>& supplied, int restart) {
  const Eigen::Index n = problem.views.front().n();
  const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(restart);
  switch (config.init) {
    case InitPolicy::kRandomUnit: {
      RandomStream stream(seed, problem.views.size());
      return apply_penalty(problem.penalty_w, stream.normal_vector(n));
    }
    case InitPolicy::kSvdWarmStart:
      return apply_penalty(
          problem.penalty_w,
          Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n))));
    case InitPolicy::kSupplied:
      if (!supplied) throw InvalidArgument("fit_multiview: supplied init missing");
      return apply_penalty(problem.penalty_w, supplied->w);
  }
  throw InvalidArgument("unknown init policy");
}

double penalized_objective(const MultiviewProblem& problem,
                           const std::vector<CanonicalVector>& us,
                           const CanonicalVector& w) {
  double value = multiview_objective(problem, us, w);
  for (std::size_t i = 0; i < us.size(); ++i)
    value -= penalty_value(problem.penalties[i], us[i].entries());
  value -= penalty_value(problem.penalty_w, w.entries());
  return value;
}

MultiviewFit run_single(const MultiviewProblem& problem, const SolverConfig& config,
                        const std::optional<MultiviewInit>& supplied, int restart) {
  const std::size_t m = problem.views.size();
  std::vector<CanonicalVector> us;
  std::optional<CanonicalVector> w_init;
  try {
    us = initial_us(problem, config, supplied, restart);
    w_init = initial_w(problem, config, supplied, restart);
  } catch (const ZeroProjection& e) {
    throw ZeroProjection(std::string("initialization degenerated: ") + e.what(), 0);
  }
  CanonicalVector w = std::move(*w_init);

  std::vector<Eigen::VectorXd> proj(m);
  for (std::size_t i = 0; i < m; ++i) proj[i] = problem.views[i].values() * us[i].entries();

  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
  TerminationReason reason = TerminationReason::kMaxIters;

  for (int sweep = 1; sweep <= config.max_iters; ++sweep) {
    double max_du = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const Eigen::VectorXd z =
          problem.views[i].values().transpose() *
          w.entries().cwiseProduct(projection_product(proj, static_cast<std::ptrdiff_t>(i)));
      CanonicalVector u_next = [&] {
        try {
          return apply_penalty(problem.penalties[i], z);
        } catch (const ZeroProjection& e) {
          throw ZeroProjection("u-update degenerated in view " + std::to_string(i) +
                                   ": " + e.what(),
                               sweep);
        }
      }();
      max_du = std::max(max_du, (u_next.entries() - us[i].entries()).squaredNorm());
      us[i] = std::move(u_next);
      proj[i] = problem.views[i].values() * us[i].entries();
    }
    CanonicalVector w_next = [&] {
      try {
        return apply_penalty(problem.penalty_w, projection_product(proj));
      } catch (const ZeroProjection& e) {
        throw ZeroProjection(std::string("w-update degenerated: ") + e.what(), sweep);
      }
    }();
    const double dw = (w_next.entries() - w.entries()).squaredNorm();
    w = std::move(w_next);

    const double objective = penalized_objective(problem, us, w);
    if (!std::isfinite(objective))
      throw NonFiniteValue("objective became non-finite during fit_multiview");
    trace.push_back(objective);
    iterations = sweep;

    // Same conjunction as the two-view solver: every update length small.
    if (max_du < config.delta_tol && dw < config.delta_tol) {
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

  return MultiviewFit{std::move(us), std::move(w), std::move(trace),
                      iterations, converged, reason};
}

}  // namespace

void validate_problem(const MultiviewProblem& problem) {
  if (problem.views.size() < 2)
    throw InvalidArgument("MultiviewProblem requires at least two views");
  if (problem.penalties.size() != problem.views.size())
    throw InvalidArgument("MultiviewProblem needs one penalty per view");
  const Eigen::Index n = problem.views.front().n();
  for (std::size_t i = 0; i < problem.views.size(); ++i) {
    if (problem.views[i].n() != n)
      throw DimensionMismatch("all views must share the sample count");
    validate_penalty(problem.penalties[i], problem.views[i].p());
  }
  validate_penalty(problem.penalty_w, n);
}

double multiview_objective(const MultiviewProblem& problem,
                           const std::vector<CanonicalVector>& us,
                           const CanonicalVector& w) {
  if (us.size() != problem.views.size())
    throw DimensionMismatch("multiview_objective: one u per view required");
  const Eigen::Index n = problem.views.front().n();
  if (w.size() != n) throw DimensionMismatch("multiview_objective: w length must be n");
  Eigen::VectorXd prod = Eigen::VectorXd::Ones(n);
  for (std::size_t i = 0; i < us.size(); ++i) {
    if (us[i].size() != problem.views[i].p())
      throw DimensionMismatch("multiview_objective: u length must match view width");
    prod = prod.cwiseProduct(problem.views[i].values() * us[i].entries());
  }
  return w.entries().dot(prod);
}

MultiviewFit fit_multiview(const MultiviewProblem& problem, const SolverConfig& config,
                           const std::optional<MultiviewInit>& supplied) {
  validate_problem(problem);
  if (config.max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
  if (config.restarts < 1) throw InvalidArgument("restarts must be >= 1");
  if (config.restarts > 1 && config.init != InitPolicy::kRandomUnit)
    throw InvalidArgument("restarts > 1 requires random_unit initialization");
  if (config.freeze_w)
    throw InvalidArgument("freeze_w is not supported by fit_multiview");

  std::optional<MultiviewFit> best;
  std::optional<ZeroProjection> first_failure;
  for (int restart = 0; restart < config.restarts; ++restart) {
    try {
      MultiviewFit candidate = run_single(problem, config, supplied, restart);
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

#pragma once

#include "swcca/core.hpp"
#include "swcca/types.hpp"

namespace swcca {

/// M >= 2 views over a shared sample axis, one loading penalty per view plus
/// the sample-weight penalty.
struct MultiviewProblem {
  std::vector<DataMatrix> views;
  std::vector<PenaltySpec> penalties;  // one per view, lengths p_i
  PenaltySpec penalty_w;
};

void validate_problem(const MultiviewProblem& problem);

struct MultiviewFit {
  std::vector<CanonicalVector> us;
  CanonicalVector w;
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
  TerminationReason termination_reason = TerminationReason::kMaxIters;
};

/// Supplied starting vectors for fit_multiview with InitPolicy::kSupplied.
struct MultiviewInit {
  std::vector<Eigen::VectorXd> us;
  Eigen::VectorXd w;
};

/// w . (X_1 u_1 o X_2 u_2 o ... o X_M u_M); equals weighted_objective for
/// M = 2.
double multiview_objective(const MultiviewProblem& problem,
                           const std::vector<CanonicalVector>& us,
                           const CanonicalVector& w);

/// Alternating sweep u_1, ..., u_M, then w. The coefficient vector for u_i is
/// X_i^T[w o prod_{j != i}(X_j u_j)], recomputed from the cached per-view
/// projections (never by dividing the full product). Random initialization
/// draws u_i from stream (seed + restart, i) and w from stream M, which makes
/// the M = 2 iterate sequence identical to the two-view solver's.
MultiviewFit fit_multiview(const MultiviewProblem& problem, const SolverConfig& config,
                           const std::optional<MultiviewInit>& supplied = std::nullopt);

}  // namespace swcca

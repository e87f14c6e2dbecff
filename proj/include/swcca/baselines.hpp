#pragma once

#include "swcca/core.hpp"
#include "swcca/types.hpp"

namespace swcca {

/// L1-ball radii for the penalized matrix decomposition baseline. Radii are
/// usually chosen as c * sqrt(p) and c * sqrt(q) with c in (0, 1); a radius
/// below 1 cannot intersect the unit L2 sphere and is rejected. When
/// standardize is set the decomposition runs on column-standardized copies of
/// the inputs, which is what the reference implementation does; the returned
/// loadings apply to the original column order either way.
struct PmdConfig {
  double c1;
  double c2;
  int max_iters = 500;
  double tol = 1e-10;
  bool standardize = true;
};

struct BaselineFit {
  CanonicalVector u;
  CanonicalVector v;
  std::vector<double> objective_trace;  // u^T X^T Y v per sweep
  int iterations = 0;
  bool converged = false;
};

/// Alternating hard-threshold updates on z_u = X^T Y v and z_v = Y^T X u,
/// i.e. the fixed-weight special case of the weighted solver. Honors
/// config.init (random draws use streams (seed + restart, 0|1), matching the
/// weighted solver's u/v streams), max_iters, delta_tol and restarts.
BaselineFit fit_l0_scca(const DataMatrix& X, const DataMatrix& Y, Eigen::Index k_u,
                        Eigen::Index k_v, const SolverConfig& config);

/// Rank-one penalized matrix decomposition: alternating soft-threshold
/// updates with the threshold chosen by bisection so that ||u||_1 <= c1 and
/// ||u||_2 = 1 (same for v/c2). Deterministic: starts from the leading
/// singular pair of X^T Y obtained by power iteration.
BaselineFit fit_pmd(const DataMatrix& X, const DataMatrix& Y, const PmdConfig& config);

/// The bisection sub-step of fit_pmd, exposed for direct verification:
/// unit-normalized soft thresholding of z with the smallest shrinkage whose
/// result satisfies ||.||_1 <= radius.
CanonicalVector l1_ball_project(const Eigen::VectorXd& z, double radius);

}  // namespace swcca

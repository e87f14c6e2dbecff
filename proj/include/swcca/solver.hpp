#pragma once

#include "swcca/core.hpp"
#include "swcca/types.hpp"

namespace swcca {

/// One weighted two-view problem. The penalty on u must fit length p, on v
/// length q, on w length n; X and Y share the sample axis.
struct SwccaProblem {
  DataMatrix X;
  DataMatrix Y;
  PenaltySpec penalty_u;
  PenaltySpec penalty_v;
  PenaltySpec penalty_w;
};

/// Throws on dimension disagreement or an invalid penalty.
void validate_problem(const SwccaProblem& problem);

/// u <- project(X^T[(Yv) o w]) under penalty_u; the weight matrix is never
/// formed.
CanonicalVector update_u(const SwccaProblem& problem, const CanonicalVector& v,
                         const CanonicalVector& w);

/// v <- project(Y^T[(Xu) o w]) under penalty_v.
CanonicalVector update_v(const SwccaProblem& problem, const CanonicalVector& u,
                         const CanonicalVector& w);

/// w <- project((Xu) o (Yv)) under penalty_w.
CanonicalVector update_w(const SwccaProblem& problem, const CanonicalVector& u,
                         const CanonicalVector& v);

/// Alternating maximization, sweep order u, v, w. Each sweep logs the
/// penalized objective (raw objective minus regularizer values; the two
/// coincide for hard-cardinality penalties). Stops when all three squared
/// update lengths drop below delta_tol, when the objective delta drops below
/// objective_tol (if enabled), or at max_iters. With restarts > 1 the fit
/// with the highest final objective wins, ties to the lowest restart index;
/// a restart that degenerates (ZeroProjection) is dropped, and the error is
/// rethrown only if every restart degenerates.
SwccaFit fit(const SwccaProblem& problem, const SolverConfig& config);

/// Initial vectors for a given config and restart index. Exposed so variant
/// solvers and reference implementations in tests can start from identical
/// iterates: random draws use streams (seed + restart, 0|1|2) for u, v, w.
struct InitialTriple {
  CanonicalVector u;
  CanonicalVector v;
  CanonicalVector w;
};
InitialTriple initial_triple(const SwccaProblem& problem, const SolverConfig& config,
                             int restart);

}  // namespace swcca

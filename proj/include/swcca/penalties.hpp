#pragma once

#include "swcca/solver.hpp"

namespace swcca {

/// Soft-threshold variant: all three penalties must be Lasso. The logged
/// objective subtracts the three lambda*||.||_1 terms.
SwccaFit fit_l1(const SwccaProblem& problem, const SolverConfig& config);

/// Groupwise-shrinkage variant: all three penalties must be GroupLasso.
SwccaFit fit_group(const SwccaProblem& problem, const SolverConfig& config);

}  // namespace swcca

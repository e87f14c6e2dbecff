#include "swcca/penalties.hpp"

namespace swcca {

SwccaFit fit_l1(const SwccaProblem& problem, const SolverConfig& config) {
  if (!std::holds_alternative<Lasso>(problem.penalty_u) ||
      !std::holds_alternative<Lasso>(problem.penalty_v) ||
      !std::holds_alternative<Lasso>(problem.penalty_w))
    throw InvalidArgument("fit_l1 requires lasso penalties on u, v and w");
  return fit(problem, config);
}

SwccaFit fit_group(const SwccaProblem& problem, const SolverConfig& config) {
  if (!std::holds_alternative<GroupLasso>(problem.penalty_u) ||
      !std::holds_alternative<GroupLasso>(problem.penalty_v) ||
      !std::holds_alternative<GroupLasso>(problem.penalty_w))
    throw InvalidArgument("fit_group requires group-lasso penalties on u, v and w");
  return fit(problem, config);
}

}  // namespace swcca

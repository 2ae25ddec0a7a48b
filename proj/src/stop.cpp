#include "dfo/stop.hpp"

#include <stdexcept>

namespace dfo {

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::TargetLoss: return "target_loss";
    case StopReason::MaxEvals: return "max_evals";
    case StopReason::MaxIters: return "max_iters";
    case StopReason::Stall: return "stall";
    case StopReason::LocalOptimum: return "local_optimum";
    case StopReason::ScheduleComplete: return "schedule_complete";
    case StopReason::CovarianceDegenerate: return "covariance_degenerate";
  }
  return "unknown";
}

void StopCriteria::validate() const {
  if (max_evals < 1)
    throw std::invalid_argument("StopCriteria: max_evals >= 1 required");
  if (stall_tol < 0.0)
    throw std::invalid_argument("StopCriteria: stall_tol >= 0 required");
  if (stall_iters && *stall_iters < 1)
    throw std::invalid_argument("StopCriteria: stall_iters >= 1 required");
  if (max_iters && *max_iters < 1)
    throw std::invalid_argument("StopCriteria: max_iters >= 1 required");
}

std::optional<StopReason> should_stop(const RunState& state,
                                      const StopCriteria& criteria) {
  if (criteria.target_loss && state.best_loss <= *criteria.target_loss)
    return StopReason::TargetLoss;
  if (state.evals >= criteria.max_evals) return StopReason::MaxEvals;
  if (criteria.max_iters && state.iter >= *criteria.max_iters)
    return StopReason::MaxIters;
  if (criteria.stall_iters &&
      state.iters_without_improvement >= *criteria.stall_iters)
    return StopReason::Stall;
  return std::nullopt;
}

}  // namespace dfo

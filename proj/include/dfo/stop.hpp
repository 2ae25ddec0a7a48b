#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>

namespace dfo {

enum class StopReason {
  TargetLoss,
  MaxEvals,
  MaxIters,
  Stall,
  LocalOptimum,          // hill climbing: no strictly better neighbor
  ScheduleComplete,      // SA cooling schedule / PSO inertia horizon finished
  CovarianceDegenerate,  // CMA-ES aborted, trace is partial
};

std::string to_string(StopReason reason);

/// Run termination criteria. max_evals is always active; the rest are opt-in.
/// The stall detector fires after `stall_iters` consecutive iterations whose
/// best-loss improvement did not exceed `stall_tol`.
struct StopCriteria {
  std::size_t max_evals = 100000;
  std::optional<double> target_loss;
  std::optional<std::size_t> max_iters;
  std::optional<std::size_t> stall_iters;
  double stall_tol = 0.0;

  void validate() const;
};

/// Snapshot consulted between iterations.
struct RunState {
  std::size_t iter = 0;
  std::size_t evals = 0;
  double best_loss = std::numeric_limits<double>::infinity();
  std::size_t iters_without_improvement = 0;
};

/// Returns the first firing criterion in priority order target_loss,
/// max_evals, max_iters, stall; nullopt to continue.
std::optional<StopReason> should_stop(const RunState& state,
                                      const StopCriteria& criteria);

}  // namespace dfo

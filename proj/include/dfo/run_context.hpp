#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "dfo/objective.hpp"
#include "dfo/search_space.hpp"
#include "dfo/stop.hpp"
#include "dfo/trace.hpp"

namespace dfo {

/// Execution options for one run.
struct EvalOptions {
  /// Compute batch losses with the OpenMP kernel instead of the serial
  /// reference. Accounting and traces are bit-identical either way; the
  /// objective must be safe for concurrent invocation when enabled.
  bool parallel_batches = false;
};

namespace detail {

/// Internal control-flow signal: a stop criterion fired mid-iteration.
/// Thrown by RunContext, caught by drive().
struct StopRun {
  StopReason reason;
};

/// Serial reference kernel: losses[i] = objective(xs[i]) for i in [0, n).
void eval_kernel_serial(const Objective& objective,
                        const std::vector<std::vector<double>>& xs,
                        std::size_t n, std::vector<double>& losses);

/// OpenMP kernel, same contract as eval_kernel_serial. Falls back to the
/// serial kernel when built without OpenMP.
void eval_kernel_parallel(const Objective& objective,
                          const std::vector<std::vector<double>>& xs,
                          std::size_t n, std::vector<double>& losses);

}  // namespace detail

/// Drives one optimizer run: owns the evaluation counter, the best-so-far
/// staircase, the stall detector and stop-criteria enforcement, so every
/// algorithm shares one accounting implementation.
///
/// Algorithms route every objective probe through evaluate() or
/// evaluate_batch() and call end_iteration() once per generation; each
/// throws detail::StopRun the moment a criterion fires, and drive() catches
/// it to assemble the final trace.
class RunContext {
 public:
  RunContext(std::string algorithm_id, Objective objective, SearchSpace space,
             StopCriteria criteria, std::uint64_t seed, EvalOptions options = {});

  /// Evaluates one vector: counts the call, rejects non-finite losses,
  /// advances the best-so-far staircase, then enforces target_loss and
  /// max_evals (in that priority order).
  double evaluate(const std::vector<double>& x);

  /// Batch form of evaluate(). In serial mode this is exactly a sequence of
  /// evaluate() calls. In parallel mode the losses are computed by the
  /// OpenMP kernel first and then committed in index order, so counters,
  /// traces and error behavior stay bit-identical to the serial mode (the
  /// stopping batch may make speculative objective calls that are never
  /// committed).
  std::vector<double> evaluate_batch(const std::vector<std::vector<double>>& xs);

  /// Fills in missing losses of a population via evaluate_batch(); members
  /// with cached losses are skipped and cost nothing.
  void evaluate_population(Population& pop);

  /// Marks the end of one algorithm iteration: updates the stall detector
  /// and enforces max_iters / stall_iters.
  void end_iteration();

  std::size_t evaluations() const noexcept { return state_.evals; }
  std::size_t iterations() const noexcept { return state_.iter; }
  double best_loss() const noexcept { return state_.best_loss; }
  const Candidate& best() const noexcept { return best_; }
  const SearchSpace& space() const noexcept { return space_; }

  /// Assembles the final trace. `reason` applies when the run body returned
  /// normally; criterion-driven stops carry their reason via StopRun.
  RunTrace finish(StopReason reason);

 private:
  void commit(const std::vector<double>& x, double loss);

  std::string algorithm_id_;
  Objective objective_;
  SearchSpace space_;
  StopCriteria criteria_;
  std::uint64_t seed_;
  EvalOptions options_;

  RunState state_;
  Candidate best_;
  std::vector<TracePoint> history_;
  double stall_watermark_ = std::numeric_limits<double>::infinity();
};

namespace detail {

/// Runs an algorithm body to completion. The body returns its natural stop
/// reason; bodies that only stop through criteria simply never return.
template <typename Body>
RunTrace drive(RunContext& ctx, Body&& body) {
  try {
    const StopReason reason = body();
    return ctx.finish(reason);
  } catch (const StopRun& stop) {
    return ctx.finish(stop.reason);
  }
}

}  // namespace detail
}  // namespace dfo

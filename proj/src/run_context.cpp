#include "dfo/run_context.hpp"

#include <cmath>
#include <exception>

#include "dfo/errors.hpp"

namespace dfo {
namespace detail {

void eval_kernel_serial(const Objective& objective,
                        const std::vector<std::vector<double>>& xs,
                        std::size_t n, std::vector<double>& losses) {
  for (std::size_t i = 0; i < n; ++i) losses[i] = objective(xs[i]);
}

void eval_kernel_parallel(const Objective& objective,
                          const std::vector<std::vector<double>>& xs,
                          std::size_t n, std::vector<double>& losses) {
#ifdef _OPENMP
  std::exception_ptr first_error = nullptr;
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    try {
      losses[i] = objective(xs[i]);
    } catch (...) {
#pragma omp critical(dfo_eval_kernel_error)
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
#else
  eval_kernel_serial(objective, xs, n, losses);
#endif
}

}  // namespace detail

RunContext::RunContext(std::string algorithm_id, Objective objective,
                       SearchSpace space, StopCriteria criteria,
                       std::uint64_t seed, EvalOptions options)
    : algorithm_id_(std::move(algorithm_id)),
      objective_(std::move(objective)),
      space_(std::move(space)),
      criteria_(criteria),
      seed_(seed),
      options_(options) {
  criteria_.validate();
}

void RunContext::commit(const std::vector<double>& x, double loss) {
  ++state_.evals;
  if (!std::isfinite(loss))
    throw NonFiniteLossError("objective returned a non-finite loss", x);
  if (loss < state_.best_loss) {
    state_.best_loss = loss;
    best_.values = x;
    best_.loss = loss;
    history_.push_back({state_.evals, loss});
  }
  if (criteria_.target_loss && state_.best_loss <= *criteria_.target_loss)
    throw detail::StopRun{StopReason::TargetLoss};
  if (state_.evals >= criteria_.max_evals)
    throw detail::StopRun{StopReason::MaxEvals};
}

double RunContext::evaluate(const std::vector<double>& x) {
  const double loss = objective_(x);
  commit(x, loss);
  return loss;
}

std::vector<double> RunContext::evaluate_batch(
    const std::vector<std::vector<double>>& xs) {
  std::vector<double> losses(xs.size());
  if (!options_.parallel_batches) {
    for (std::size_t i = 0; i < xs.size(); ++i) losses[i] = evaluate(xs[i]);
    return losses;
  }
  // Only as many entries as the budget allows can ever be committed.
  const std::size_t remaining = criteria_.max_evals - state_.evals;
  const std::size_t n = std::min(xs.size(), remaining);
  detail::eval_kernel_parallel(objective_, xs, n, losses);
  for (std::size_t i = 0; i < n; ++i) commit(xs[i], losses[i]);
  if (n < xs.size()) throw detail::StopRun{StopReason::MaxEvals};
  return losses;
}

void RunContext::evaluate_population(Population& pop) {
  std::vector<std::size_t> missing;
  std::vector<std::vector<double>> xs;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (!pop[i].loss) {
      missing.push_back(i);
      xs.push_back(pop[i].values);
    }
  }
  if (missing.empty()) return;
  const std::vector<double> losses = evaluate_batch(xs);
  for (std::size_t k = 0; k < missing.size(); ++k)
    pop[missing[k]].loss = losses[k];
  pop.sorted = false;
}

void RunContext::end_iteration() {
  ++state_.iter;
  if (stall_watermark_ - state_.best_loss > criteria_.stall_tol) {
    stall_watermark_ = state_.best_loss;
    state_.iters_without_improvement = 0;
  } else {
    ++state_.iters_without_improvement;
  }
  if (const auto reason = should_stop(state_, criteria_))
    throw detail::StopRun{*reason};
}

RunTrace RunContext::finish(StopReason reason) {
  RunTrace trace;
  trace.seed = seed_;
  trace.algorithm_id = algorithm_id_;
  trace.history = std::move(history_);
  trace.best = best_;
  trace.total_evals = state_.evals;
  trace.stop_reason = reason;
  return trace;
}

}  // namespace dfo

#include "dfo/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dfo/errors.hpp"

namespace dfo::local_search {

NeighborhoodSpec NeighborhoodSpec::coordinate_step(double step) {
  if (step <= 0.0)
    throw std::invalid_argument("NeighborhoodSpec: step > 0 required");
  NeighborhoodSpec s;
  s.kind = Kind::CoordinateStep;
  s.step = step;
  return s;
}

NeighborhoodSpec NeighborhoodSpec::bit_flip() {
  NeighborhoodSpec s;
  s.kind = Kind::BitFlip;
  return s;
}

NeighborhoodSpec NeighborhoodSpec::gaussian_perturb(std::optional<double> stddev) {
  if (stddev && *stddev <= 0.0)
    throw std::invalid_argument("NeighborhoodSpec: stddev > 0 required");
  NeighborhoodSpec s;
  s.kind = Kind::GaussianPerturb;
  s.stddev = stddev;
  return s;
}

void AnnealSchedule::validate() const {
  if (t_initial <= 0.0)
    throw std::invalid_argument("AnnealSchedule: t_initial > 0 required");
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("AnnealSchedule: alpha in [0,1] required");
  if (max_iters < 1)
    throw std::invalid_argument("AnnealSchedule: max_iters >= 1 required");
}

std::vector<std::vector<double>> neighbors(const std::vector<double>& values,
                                           const NeighborhoodSpec& spec,
                                           const SearchSpace& space) {
  if (spec.kind == NeighborhoodSpec::Kind::GaussianPerturb)
    throw std::invalid_argument("neighbors: GaussianPerturb is not enumerable");
  std::vector<std::vector<double>> out;
  if (spec.kind == NeighborhoodSpec::Kind::CoordinateStep) {
    if (space.is_binary())
      throw UnsupportedSpaceError("neighbors: CoordinateStep needs a box");
    for (std::size_t j = 0; j < values.size(); ++j) {
      for (const double delta : {spec.step, -spec.step}) {
        std::vector<double> n = values;
        n[j] += delta;
        if (n[j] >= space.lower()[j] && n[j] <= space.upper()[j])
          out.push_back(std::move(n));
      }
    }
  } else {  // BitFlip
    if (!space.is_binary())
      throw UnsupportedSpaceError("neighbors: BitFlip needs a binary space");
    for (std::size_t j = 0; j < values.size(); ++j) {
      std::vector<double> n = values;
      n[j] = 1.0 - n[j];
      out.push_back(std::move(n));
    }
  }
  return out;
}

RunTrace hill_climb(const Objective& objective, const SearchSpace& space,
                    const NeighborhoodSpec& spec,
                    std::optional<std::vector<double>> start,
                    const StopCriteria& criteria, RandomStream& rng,
                    const EvalOptions& eval) {
  if (spec.kind == NeighborhoodSpec::Kind::GaussianPerturb)
    throw std::invalid_argument("hill_climb: an enumerable neighborhood is required");
  RunContext ctx("hill-climb", objective, space, criteria, rng.seed(), eval);
  return detail::drive(ctx, [&]() -> StopReason {
    std::vector<double> current =
        start ? *start : sample_uniform(space, rng).values;
    if (current.size() != space.dim())
      throw std::invalid_argument("hill_climb: start dimension mismatch");
    double current_loss = ctx.evaluate(current);

    for (;;) {
      const auto candidates = neighbors(current, spec, space);
      if (candidates.empty()) return StopReason::LocalOptimum;
      const std::vector<double> losses = ctx.evaluate_batch(candidates);
      std::size_t best = 0;
      for (std::size_t i = 1; i < losses.size(); ++i)
        if (losses[i] < losses[best]) best = i;  // ties keep the lowest index
      if (!(losses[best] < current_loss)) return StopReason::LocalOptimum;
      current = candidates[best];
      current_loss = losses[best];
      ctx.end_iteration();
    }
  });
}

double acceptance_probability(double loss_current, double loss_proposed,
                              double t) {
  if (t <= 0.0)
    throw std::invalid_argument("acceptance_probability: t > 0 required");
  const double delta = loss_proposed - loss_current;
  if (delta <= 0.0) return 1.0;
  return std::exp(-delta / t);
}

RunTrace simulated_annealing(const Objective& objective,
                             const SearchSpace& space,
                             const NeighborhoodSpec& proposal,
                             const AnnealSchedule& schedule,
                             const StopCriteria& criteria, RandomStream& rng,
                             std::optional<std::vector<double>> start,
                             const EvalOptions& eval) {
  schedule.validate();
  const bool gaussian = proposal.kind == NeighborhoodSpec::Kind::GaussianPerturb;
  if (gaussian && space.is_binary())
    throw UnsupportedSpaceError("simulated_annealing: GaussianPerturb needs a box");
  if (!gaussian && proposal.kind != NeighborhoodSpec::Kind::BitFlip)
    throw std::invalid_argument(
        "simulated_annealing: proposal must be GaussianPerturb or BitFlip");
  if (proposal.kind == NeighborhoodSpec::Kind::BitFlip && !space.is_binary())
    throw UnsupportedSpaceError("simulated_annealing: BitFlip needs a binary space");

  RunContext ctx("simulated-annealing", objective, space, criteria, rng.seed(),
                 eval);
  return detail::drive(ctx, [&]() -> StopReason {
    std::vector<double> current =
        start ? *start : sample_uniform(space, rng).values;
    if (current.size() != space.dim())
      throw std::invalid_argument("simulated_annealing: start dimension mismatch");
    double current_loss = ctx.evaluate(current);
    double temperature = schedule.t_initial;

    for (std::size_t k = 0; k < schedule.max_iters; ++k) {
      std::vector<double> next = current;
      const auto j = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(space.dim()) - 1));
      if (gaussian) {
        const double stddev =
            proposal.stddev ? *proposal.stddev : 0.1 * space.width(j);
        next[j] = std::clamp(next[j] + stddev * rng.normal(), space.lower()[j],
                             space.upper()[j]);
      } else {
        next[j] = 1.0 - next[j];
      }
      const double next_loss = ctx.evaluate(next);

      bool accept = next_loss <= current_loss;
      if (!accept && temperature > 0.0) {
        // one uniform draw per worse proposal, none for improvements;
        // at T = 0 worse proposals are rejected outright
        accept = rng.uniform() <
                 acceptance_probability(current_loss, next_loss, temperature);
      }
      if (accept) {
        current = std::move(next);
        current_loss = next_loss;
      }
      temperature *= schedule.alpha;
      ctx.end_iteration();
    }
    return StopReason::ScheduleComplete;
  });
}

}  // namespace dfo::local_search

#include "dfo/de.hpp"

#include <algorithm>
#include <stdexcept>

#include "dfo/errors.hpp"

namespace dfo::de {

void DeConfig::validate() const {
  if (pop_size < 4)
    throw std::invalid_argument("DeConfig: pop_size >= 4 required");
  if (crossover_prob < 0.0 || crossover_prob >= 1.0)
    throw std::invalid_argument("DeConfig: crossover_prob in [0,1) required");
  if (diff_weight <= 0.0)
    throw std::invalid_argument("DeConfig: diff_weight > 0 required");
  if (greediness < 0.0)
    throw std::invalid_argument("DeConfig: greediness >= 0 required");
}

std::vector<double> mutate(const Population& pop, std::size_t i,
                           const Candidate& best, const DeConfig& cfg,
                           RandomStream& rng) {
  const std::size_t p = pop.size();
  if (p < 4) throw std::invalid_argument("de::mutate: population size >= 4 required");
  const auto draw_distinct = [&](std::initializer_list<std::size_t> taken) {
    for (;;) {
      const auto r = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(p) - 1));
      if (std::find(taken.begin(), taken.end(), r) == taken.end()) return r;
    }
  };
  const std::size_t r1 = draw_distinct({i});
  const std::size_t r2 = draw_distinct({i, r1});
  const std::size_t r3 = draw_distinct({i, r1, r2});

  const std::size_t dim = pop[i].values.size();
  std::vector<double> trial(dim);
  if (cfg.scheme == Scheme::Rand1) {
    for (std::size_t j = 0; j < dim; ++j) {
      trial[j] = pop[r1].values[j] +
                 cfg.diff_weight * (pop[r2].values[j] - pop[r3].values[j]);
    }
  } else {
    for (std::size_t j = 0; j < dim; ++j) {
      trial[j] = pop[i].values[j] +
                 cfg.greediness * (best.values[j] - pop[i].values[j]) +
                 cfg.diff_weight * (pop[r2].values[j] - pop[r3].values[j]);
    }
  }
  return trial;
}

std::size_t sample_segment_length(double crossover_prob, std::size_t dim,
                                  RandomStream& rng) {
  if (crossover_prob < 0.0 || crossover_prob >= 1.0)
    throw std::invalid_argument("sample_segment_length: probability in [0,1) required");
  std::size_t length = 1;
  while (length < dim && rng.uniform() < crossover_prob) ++length;
  return length;
}

std::vector<double> crossover(const std::vector<double>& target,
                              const std::vector<double>& trial, std::size_t n,
                              std::size_t length) {
  const std::size_t dim = target.size();
  if (trial.size() != dim)
    throw std::invalid_argument("de::crossover: vector length mismatch");
  if (n < 1 || n > dim || length < 1 || length > dim)
    throw std::invalid_argument("de::crossover: n and length must be in [1, dim]");
  std::vector<double> out = target;
  for (std::size_t t = 0; t < length; ++t)
    out[(n - 1 + t) % dim] = trial[(n - 1 + t) % dim];
  return out;
}

const Candidate& select(const Candidate& current, const Candidate& trial) {
  if (!current.loss || !trial.loss)
    throw std::invalid_argument("de::select: both candidates must be evaluated");
  return *trial.loss < *current.loss ? trial : current;
}

RunTrace run(const Objective& objective, const SearchSpace& space,
             const DeConfig& cfg, const StopCriteria& criteria,
             RandomStream& rng, const EvalOptions& eval,
             const GenerationObserver& observer) {
  cfg.validate();
  if (space.is_binary())
    throw UnsupportedSpaceError("de::run: DE is defined on continuous spaces");
  RunContext ctx(cfg.scheme == Scheme::Rand1 ? "de-rand1" : "de-best1",
                 objective, space, criteria, rng.seed(), eval);
  return detail::drive(ctx, [&]() -> StopReason {
    Population pop;
    pop.members.reserve(cfg.pop_size);
    for (std::size_t i = 0; i < cfg.pop_size; ++i)
      pop.members.push_back(sample_uniform(space, rng));
    ctx.evaluate_population(pop);
    if (observer) observer(pop);

    const std::int64_t dim = static_cast<std::int64_t>(space.dim());
    for (;;) {
      // Generation best, frozen for the whole sweep.
      std::size_t best_idx = 0;
      for (std::size_t i = 1; i < pop.size(); ++i)
        if (*pop[i].loss < *pop[best_idx].loss) best_idx = i;
      const Candidate best = pop[best_idx];

      std::vector<std::vector<double>> trials(pop.size());
      for (std::size_t i = 0; i < pop.size(); ++i) {
        std::vector<double> v = mutate(pop, i, best, cfg, rng);
        const auto n = static_cast<std::size_t>(rng.uniform_int(1, dim));
        const std::size_t length =
            sample_segment_length(cfg.crossover_prob, space.dim(), rng);
        trials[i] = clamp(space, crossover(pop[i].values, v, n, length));
      }
      const std::vector<double> losses = ctx.evaluate_batch(trials);
      for (std::size_t i = 0; i < pop.size(); ++i) {
        Candidate trial{std::move(trials[i]), losses[i]};
        pop[i] = select(pop[i], trial);
      }
      if (observer) observer(pop);
      ctx.end_iteration();
    }
  });
}

}  // namespace dfo::de

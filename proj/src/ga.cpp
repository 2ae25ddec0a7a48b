#include "dfo/ga.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dfo/errors.hpp"

namespace dfo::ga {
namespace {

double resolved_mutation_prob(const GaConfig& cfg, const SearchSpace& space) {
  return cfg.mutation_prob ? *cfg.mutation_prob
                           : 1.0 / static_cast<double>(space.dim());
}

/// One draw from a discrete distribution via CDF walk.
std::size_t sample_index(const std::vector<double>& probs, RandomStream& rng) {
  const double u = rng.uniform();
  double cum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return i;
  }
  return probs.size() - 1;  // rounding residue
}

}  // namespace

void GaConfig::validate(const SearchSpace& space) const {
  if (pop_size < 2 || pop_size % 2 != 0)
    throw std::invalid_argument("GaConfig: pop_size must be even and >= 2");
  if (mutation_prob && (*mutation_prob < 0.0 || *mutation_prob > 1.0))
    throw std::invalid_argument("GaConfig: mutation_prob in [0,1] required");
  if (!uniform_crossover &&
      (crossover_points < 1 || crossover_points >= space.dim()))
    throw std::invalid_argument("GaConfig: 1 <= crossover_points < dim required");
  if (init_bernoulli_p < 0.0 || init_bernoulli_p > 1.0)
    throw std::invalid_argument("GaConfig: init_bernoulli_p in [0,1] required");
  if (init_stddev <= 0.0)
    throw std::invalid_argument("GaConfig: init_stddev > 0 required");
  if (mutation_stddev && *mutation_stddev <= 0.0)
    throw std::invalid_argument("GaConfig: mutation_stddev > 0 required");
  if (elitism > pop_size)
    throw std::invalid_argument("GaConfig: elitism <= pop_size required");
}

Population init_population(const SearchSpace& space, const GaConfig& cfg,
                           RandomStream& rng) {
  Population pop;
  pop.members.resize(cfg.pop_size);
  for (Candidate& c : pop.members) {
    c.values.resize(space.dim());
    if (space.is_binary()) {
      for (double& v : c.values)
        v = rng.uniform() < cfg.init_bernoulli_p ? 1.0 : 0.0;
    } else {
      for (std::size_t j = 0; j < space.dim(); ++j) {
        const double draw = cfg.init_mean + cfg.init_stddev * rng.normal();
        c.values[j] = std::clamp(draw, space.lower()[j], space.upper()[j]);
      }
    }
  }
  return pop;
}

std::vector<double> selection_probabilities(const std::vector<double>& losses) {
  if (losses.empty())
    throw EmptyPopulationError("selection_probabilities: empty loss list");
  const double shift = *std::min_element(losses.begin(), losses.end());
  std::vector<double> probs(losses.size());
  double total = 0.0;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    probs[i] = std::exp(-(losses[i] - shift));
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return probs;
}

std::vector<std::pair<std::size_t, std::size_t>> select_parent_pairs(
    const Population& pop, const std::vector<double>& probs, RandomStream& rng) {
  if (pop.size() < 2)
    throw std::invalid_argument("select_parent_pairs: need at least 2 candidates");
  if (probs.size() != pop.size())
    throw std::invalid_argument("select_parent_pairs: probs/population size mismatch");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(pop.size() / 2);
  for (std::size_t k = 0; k < pop.size() / 2; ++k) {
    const std::size_t first = sample_index(probs, rng);
    std::size_t second = sample_index(probs, rng);
    while (second == first) second = sample_index(probs, rng);
    pairs.emplace_back(first, second);
  }
  return pairs;
}

std::pair<std::vector<double>, std::vector<double>> crossover(
    const std::vector<double>& a, const std::vector<double>& b,
    std::optional<std::size_t> points, RandomStream& rng) {
  if (a.size() != b.size())
    throw std::invalid_argument("crossover: parent length mismatch");
  const std::size_t dim = a.size();
  std::vector<double> child1(dim);
  std::vector<double> child2(dim);

  if (!points) {  // uniform crossover
    for (std::size_t j = 0; j < dim; ++j) {
      const bool from_a = rng.uniform() < 0.5;
      child1[j] = from_a ? a[j] : b[j];
      child2[j] = from_a ? b[j] : a[j];
    }
    return {std::move(child1), std::move(child2)};
  }

  const std::size_t k = *points;
  if (k < 1 || k >= dim)
    throw std::invalid_argument("crossover: 1 <= k < dim required");
  // k distinct cuts drawn uniformly from the dim-1 segment gaps
  // (cut value g means the boundary before index g).
  std::vector<std::size_t> gaps(dim - 1);
  std::iota(gaps.begin(), gaps.end(), static_cast<std::size_t>(1));
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(i),
                        static_cast<std::int64_t>(dim - 2)));
    std::swap(gaps[i], gaps[j]);
  }
  std::vector<std::size_t> cuts(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(cuts.begin(), cuts.end());

  bool from_a = true;
  std::size_t next_cut = 0;
  for (std::size_t j = 0; j < dim; ++j) {
    if (next_cut < cuts.size() && cuts[next_cut] == j) {
      from_a = !from_a;
      ++next_cut;
    }
    child1[j] = from_a ? a[j] : b[j];
    child2[j] = from_a ? b[j] : a[j];
  }
  return {std::move(child1), std::move(child2)};
}

std::vector<double> mutate(std::vector<double> v, const SearchSpace& space,
                           const GaConfig& cfg, RandomStream& rng) {
  const double eta = resolved_mutation_prob(cfg, space);
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (rng.uniform() >= eta) continue;
    if (space.is_binary()) {
      v[j] = 1.0 - v[j];
    } else {
      const double stddev =
          cfg.mutation_stddev ? *cfg.mutation_stddev : 0.1 * space.width(j);
      v[j] = std::clamp(v[j] + stddev * rng.normal(), space.lower()[j],
                        space.upper()[j]);
    }
  }
  return v;
}

RunTrace run(const Objective& objective, const SearchSpace& space,
             const GaConfig& cfg, const StopCriteria& criteria,
             RandomStream& rng, const EvalOptions& eval,
             const GenerationObserver& observer) {
  cfg.validate(space);
  const std::optional<std::size_t> mode =
      cfg.uniform_crossover ? std::nullopt
                            : std::optional<std::size_t>(cfg.crossover_points);
  RunContext ctx("ga", objective, space, criteria, rng.seed(), eval);
  return detail::drive(ctx, [&]() -> StopReason {
    Population pop = init_population(space, cfg, rng);
    ctx.evaluate_population(pop);
    if (observer) observer(pop);
    for (;;) {
      std::vector<double> losses(pop.size());
      for (std::size_t i = 0; i < pop.size(); ++i) losses[i] = *pop[i].loss;
      const auto probs = selection_probabilities(losses);
      const auto pairs = select_parent_pairs(pop, probs, rng);

      std::vector<Candidate> children;
      children.reserve(cfg.pop_size);
      for (const auto& [i, j] : pairs) {
        auto [c1, c2] = crossover(pop[i].values, pop[j].values, mode, rng);
        children.push_back({mutate(std::move(c1), space, cfg, rng), std::nullopt});
        children.push_back({mutate(std::move(c2), space, cfg, rng), std::nullopt});
      }

      Population next;
      next.members.reserve(cfg.pop_size);
      if (cfg.elitism > 0) {
        Population ranked = pop;
        ranked.sort_by_loss();
        for (std::size_t e = 0; e < cfg.elitism; ++e)
          next.members.push_back(ranked[e]);
      }
      for (std::size_t k = 0; next.size() < cfg.pop_size; ++k)
        next.members.push_back(std::move(children[k]));

      ctx.evaluate_population(next);
      pop = std::move(next);
      if (observer) observer(pop);
      ctx.end_iteration();
    }
  });
}

}  // namespace dfo::ga

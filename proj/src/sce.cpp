#include "dfo/sce.hpp"

#include <algorithm>
#include <stdexcept>

#include "dfo/errors.hpp"

namespace dfo::sce {
namespace {

using Hypercube = std::pair<std::vector<double>, std::vector<double>>;

std::vector<double> sample_in(const Hypercube& h, RandomStream& rng) {
  std::vector<double> x(h.first.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    x[j] = rng.uniform(h.first[j], h.second[j]);
  return x;
}

/// q distinct indices drawn by rank probability, renormalized over the
/// unchosen after each pick.
std::vector<std::size_t> draw_parent_indices(const std::vector<double>& probs,
                                             std::size_t q, RandomStream& rng) {
  std::vector<std::size_t> picked;
  picked.reserve(q);
  std::vector<bool> taken(probs.size(), false);
  for (std::size_t t = 0; t < q; ++t) {
    double remaining = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i)
      if (!taken[i]) remaining += probs[i];
    const double u = rng.uniform() * remaining;
    double cum = 0.0;
    std::size_t chosen = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (taken[i]) continue;
      chosen = i;
      cum += probs[i];
      if (u < cum) break;
    }
    taken[chosen] = true;
    picked.push_back(chosen);
  }
  return picked;
}

}  // namespace

std::size_t SceConfig::resolved_complex_size(const SearchSpace& space) const {
  return complex_size ? *complex_size : 2 * space.dim() + 1;
}

std::size_t SceConfig::resolved_parents(const SearchSpace& space) const {
  return cce_parents ? *cce_parents : space.dim() + 1;
}

std::size_t SceConfig::resolved_evolution_rounds(const SearchSpace& space) const {
  return cce_evolution_rounds ? *cce_evolution_rounds
                              : resolved_complex_size(space);
}

void SceConfig::validate(const SearchSpace& space) const {
  if (num_complexes < 1)
    throw std::invalid_argument("SceConfig: num_complexes >= 1 required");
  const std::size_t m = resolved_complex_size(space);
  if (m < space.dim() + 1)
    throw std::invalid_argument("SceConfig: complex_size >= dim + 1 required");
  const std::size_t q = resolved_parents(space);
  if (q < 2 || q > m)
    throw std::invalid_argument("SceConfig: 2 <= cce_parents <= complex_size required");
  if (cce_offspring_rounds < 1)
    throw std::invalid_argument("SceConfig: cce_offspring_rounds >= 1 required");
  if (resolved_evolution_rounds(space) < 1)
    throw std::invalid_argument("SceConfig: cce_evolution_rounds >= 1 required");
}

std::vector<Population> partition_complexes(const Population& sorted_pop,
                                            std::size_t p, std::size_t m) {
  if (sorted_pop.size() != p * m)
    throw std::invalid_argument("partition_complexes: population size must be p*m");
  for (std::size_t i = 1; i < sorted_pop.size(); ++i) {
    if (*sorted_pop[i - 1].loss > *sorted_pop[i].loss)
      throw std::invalid_argument("partition_complexes: population must be sorted");
  }
  std::vector<Population> complexes(p);
  for (std::size_t k = 0; k < p; ++k) {
    complexes[k].members.reserve(m);
    for (std::size_t r = 0; r < m; ++r)
      complexes[k].members.push_back(sorted_pop[k + r * p]);
    complexes[k].sorted = true;  // ranks k, k+p, ... are ascending
  }
  return complexes;
}

std::vector<double> centroid(const std::vector<std::vector<double>>& sorted_parents) {
  if (sorted_parents.size() < 2)
    throw std::invalid_argument("centroid: at least two parents required");
  const std::size_t d = sorted_parents.front().size();
  std::vector<double> g(d, 0.0);
  for (std::size_t t = 0; t + 1 < sorted_parents.size(); ++t)
    for (std::size_t j = 0; j < d; ++j) g[j] += sorted_parents[t][j];
  for (double& v : g) v /= static_cast<double>(sorted_parents.size() - 1);
  return g;
}

std::vector<double> reflect(const std::vector<double>& centroid,
                            const std::vector<double>& worst) {
  std::vector<double> r(centroid.size());
  for (std::size_t j = 0; j < r.size(); ++j)
    r[j] = 2.0 * centroid[j] - worst[j];
  return r;
}

std::vector<double> contract(const std::vector<double>& centroid,
                             const std::vector<double>& worst) {
  std::vector<double> c(centroid.size());
  for (std::size_t j = 0; j < c.size(); ++j)
    c[j] = 0.5 * (centroid[j] + worst[j]);
  return c;
}

std::pair<std::vector<double>, std::vector<double>> tight_bounds(
    const Population& complex) {
  if (complex.size() == 0)
    throw std::invalid_argument("tight_bounds: empty complex");
  const std::size_t d = complex[0].values.size();
  std::pair<std::vector<double>, std::vector<double>> h{complex[0].values,
                                                        complex[0].values};
  for (const Candidate& c : complex.members) {
    for (std::size_t j = 0; j < d; ++j) {
      h.first[j] = std::min(h.first[j], c.values[j]);
      h.second[j] = std::max(h.second[j], c.values[j]);
    }
  }
  return h;
}

std::vector<double> sampling_probabilities(std::size_t m) {
  if (m < 1) throw std::invalid_argument("sampling_probabilities: m >= 1 required");
  std::vector<double> probs(m);
  const double denom = static_cast<double>(m) * (static_cast<double>(m) + 1.0);
  for (std::size_t i = 1; i <= m; ++i)
    probs[i - 1] = 2.0 * (static_cast<double>(m) + 1.0 - static_cast<double>(i)) / denom;
  return probs;
}

Population evolve_complex(Population complex, std::size_t q, std::size_t alpha,
                          std::size_t beta, const SearchSpace& space,
                          const Objective& eval, RandomStream& rng) {
  const std::size_t m = complex.size();
  if (q < 2 || q > m)
    throw std::invalid_argument("evolve_complex: 2 <= q <= m required");
  const std::vector<double> probs = sampling_probabilities(m);

  for (std::size_t round = 0; round < beta; ++round) {
    // Parents are slots of the complex; the worst parent's slot is
    // overwritten in place, so the bounding box sees each replacement.
    std::vector<std::size_t> parents = draw_parent_indices(probs, q, rng);

    for (std::size_t step = 0; step < alpha; ++step) {
      std::stable_sort(parents.begin(), parents.end(),
                       [&complex](std::size_t a, std::size_t b) {
                         return *complex[a].loss < *complex[b].loss;
                       });
      const std::size_t worst = parents.back();

      std::vector<std::vector<double>> batch;
      batch.reserve(q);
      for (std::size_t idx : parents) batch.push_back(complex[idx].values);
      const std::vector<double> g = centroid(batch);
      std::vector<double> reflected = reflect(g, complex[worst].values);

      const Hypercube h = tight_bounds(complex);
      if (!space.contains(reflected)) reflected = sample_in(h, rng);

      const double reflected_loss = eval(reflected);
      if (reflected_loss < *complex[worst].loss) {
        complex[worst] = {std::move(reflected), reflected_loss};
      } else {
        std::vector<double> contracted = contract(g, complex[worst].values);
        const double contracted_loss = eval(contracted);
        if (contracted_loss < *complex[worst].loss) {
          complex[worst] = {std::move(contracted), contracted_loss};
        } else {
          // accepted unconditionally; the mutation step has no loss test
          std::vector<double> random_point = sample_in(h, rng);
          const double random_loss = eval(random_point);
          complex[worst] = {std::move(random_point), random_loss};
        }
      }
      complex.sorted = false;
    }
    complex.sort_by_loss();  // once per external round
  }
  return complex;
}

RunTrace run(const Objective& objective, const SearchSpace& space,
             const SceConfig& cfg, const StopCriteria& criteria,
             RandomStream& rng, const EvalOptions& eval,
             const IterationObserver& observer) {
  if (space.is_binary())
    throw UnsupportedSpaceError(
        "sce::run: the CCE geometry needs a continuous space");
  cfg.validate(space);
  const std::size_t p = cfg.num_complexes;
  const std::size_t m = cfg.resolved_complex_size(space);
  const std::size_t q = cfg.resolved_parents(space);
  const std::size_t alpha = cfg.cce_offspring_rounds;
  const std::size_t beta = cfg.resolved_evolution_rounds(space);

  RunContext ctx("sce", objective, space, criteria, rng.seed(), eval);
  const Objective counted = [&ctx](const std::vector<double>& x) {
    return ctx.evaluate(x);
  };
  return detail::drive(ctx, [&]() -> StopReason {
    Population pop;
    pop.members.reserve(p * m);
    for (std::size_t i = 0; i < p * m; ++i)
      pop.members.push_back(sample_uniform(space, rng));
    ctx.evaluate_population(pop);
    pop.sort_by_loss();
    if (observer) observer(pop);

    for (;;) {
      std::vector<Population> complexes = partition_complexes(pop, p, m);
      for (Population& complex : complexes)
        complex = evolve_complex(std::move(complex), q, alpha, beta, space,
                                 counted, rng);
      pop.members.clear();
      for (Population& complex : complexes) {
        for (Candidate& c : complex.members)
          pop.members.push_back(std::move(c));
      }
      pop.sort_by_loss();
      if (observer) observer(pop);
      ctx.end_iteration();
    }
  });
}

}  // namespace dfo::sce

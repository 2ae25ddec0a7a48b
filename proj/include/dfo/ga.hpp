#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "dfo/objective.hpp"
#include "dfo/random.hpp"
#include "dfo/run_context.hpp"
#include "dfo/search_space.hpp"
#include "dfo/stop.hpp"
#include "dfo/trace.hpp"

namespace dfo::ga {

struct GaConfig {
  std::size_t pop_size = 40;  // even
  /// Per-position mutation probability; defaults to 1/dim when unset.
  std::optional<double> mutation_prob;
  std::size_t crossover_points = 1;  // ignored when uniform_crossover
  bool uniform_crossover = false;
  double init_bernoulli_p = 0.5;  // binary spaces
  double init_mean = 0.0;         // continuous spaces
  double init_stddev = 1.0;
  /// Stddev of the additive Gaussian mutation on continuous spaces;
  /// defaults to 0.1 * (upper - lower) per coordinate when unset.
  std::optional<double> mutation_stddev;
  std::size_t elitism = 1;

  void validate(const SearchSpace& space) const;
};

/// Bernoulli(init_bernoulli_p) bits, or Normal(init_mean, init_stddev^2)
/// entries clamped to the box. Losses left unset.
Population init_population(const SearchSpace& space, const GaConfig& cfg,
                           RandomStream& rng);

/// Softmax selection probabilities over losses: p_i proportional to
/// exp(-loss_i), computed shift-invariantly (minimum subtracted before
/// exponentiation so large losses cannot overflow).
std::vector<double> selection_probabilities(const std::vector<double>& losses);

/// Draws pop_size/2 parent index pairs with replacement across pairs,
/// proportional to probs; within a pair the two indices are distinct
/// (collisions resampled).
std::vector<std::pair<std::size_t, std::size_t>> select_parent_pairs(
    const Population& pop, const std::vector<double>& probs, RandomStream& rng);

/// k-point crossover when `points` holds a value (k distinct cut positions
/// uniform over the dim-1 gaps, alternating segments swapped), uniform
/// crossover otherwise. Children are complementary: position j comes from
/// one parent in the first child and from the other in the second.
std::pair<std::vector<double>, std::vector<double>> crossover(
    const std::vector<double>& a, const std::vector<double>& b,
    std::optional<std::size_t> points, RandomStream& rng);

/// Independently selects each position with the mutation probability; flips
/// selected bits, or perturbs selected entries with Gaussian noise and
/// clamps them to the box.
std::vector<double> mutate(std::vector<double> v, const SearchSpace& space,
                           const GaConfig& cfg, RandomStream& rng);

using GenerationObserver = std::function<void(const Population&)>;

/// Generational loop: evaluate, softmax selection, pairwise crossover,
/// mutation; children replace parents except the `elitism` best, which
/// survive verbatim.
RunTrace run(const Objective& objective, const SearchSpace& space,
             const GaConfig& cfg, const StopCriteria& criteria,
             RandomStream& rng, const EvalOptions& eval = {},
             const GenerationObserver& observer = {});

}  // namespace dfo::ga

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "dfo/objective.hpp"
#include "dfo/random.hpp"
#include "dfo/run_context.hpp"
#include "dfo/search_space.hpp"
#include "dfo/stop.hpp"
#include "dfo/trace.hpp"

namespace dfo::sce {

struct SceConfig {
  std::size_t num_complexes = 2;  // p >= 1
  /// Points per complex; m >= dim + 1. Defaults to 2 dim + 1 when unset.
  std::optional<std::size_t> complex_size;
  /// Parents per CCE batch, 2 <= q <= m. Defaults to dim + 1 when unset.
  std::optional<std::size_t> cce_parents;
  std::size_t cce_offspring_rounds = 1;  // alpha >= 1
  /// External evolution rounds per complex; beta >= 1. Defaults to m.
  std::optional<std::size_t> cce_evolution_rounds;

  std::size_t resolved_complex_size(const SearchSpace& space) const;
  std::size_t resolved_parents(const SearchSpace& space) const;
  std::size_t resolved_evolution_rounds(const SearchSpace& space) const;
  void validate(const SearchSpace& space) const;
};

/// Round-robin deal of a sorted population into p complexes of m points:
/// complex k receives sorted ranks k, k+p, k+2p, ... so every complex spans
/// the quality range. Each complex comes out internally sorted.
std::vector<Population> partition_complexes(const Population& sorted_pop,
                                            std::size_t p, std::size_t m);

/// Rank-based sampling probabilities 2(m+1-i) / (m(m+1)) for 1-based rank i.
std::vector<double> sampling_probabilities(std::size_t m);

/// Mean of the q-1 best parents (all but the last of `sorted_parents`).
std::vector<double> centroid(const std::vector<std::vector<double>>& sorted_parents);

/// Mirror of the worst point through the centroid: 2g - worst.
std::vector<double> reflect(const std::vector<double>& centroid,
                            const std::vector<double>& worst);

/// Midpoint between centroid and worst point.
std::vector<double> contract(const std::vector<double>& centroid,
                             const std::vector<double>& worst);

/// Tight axis-aligned bounding box of the complex: every member inside,
/// every face touched by at least one member.
std::pair<std::vector<double>, std::vector<double>> tight_bounds(
    const Population& complex);

/// One CCE pass over a sorted complex: beta external rounds each sample q
/// distinct parents by rank probability, then run alpha rounds of
/// reflection / contraction / random replacement against the worst parent.
/// `eval` is charged one call per probe.
Population evolve_complex(Population complex, std::size_t q, std::size_t alpha,
                          std::size_t beta, const SearchSpace& space,
                          const Objective& eval, RandomStream& rng);

using IterationObserver = std::function<void(const Population&)>;

RunTrace run(const Objective& objective, const SearchSpace& space,
             const SceConfig& cfg, const StopCriteria& criteria,
             RandomStream& rng, const EvalOptions& eval = {},
             const IterationObserver& observer = {});

}  // namespace dfo::sce

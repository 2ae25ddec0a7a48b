#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "dfo/objective.hpp"
#include "dfo/random.hpp"
#include "dfo/run_context.hpp"
#include "dfo/search_space.hpp"
#include "dfo/stop.hpp"
#include "dfo/trace.hpp"

namespace dfo::de {

enum class Scheme {
  Rand1,       // v = x_r1 + F * (x_r2 - x_r3)
  Best1Greedy  // v = x_i + greediness * (x_best - x_i) + F * (x_r2 - x_r3)
};

struct DeConfig {
  std::size_t pop_size = 50;   // >= 4 so i, r1, r2, r3 can be distinct
  double diff_weight = 0.5;    // F
  double greediness = 0.5;     // lambda in Best1Greedy
  double crossover_prob = 0.9; // geometric segment-length parameter, in [0,1)
  Scheme scheme = Scheme::Rand1;

  void validate() const;
};

/// Builds the trial vector for slot i. r1, r2, r3 are drawn uniformly,
/// mutually distinct and distinct from i (always all three, in that order,
/// so the draw sequence does not depend on the scheme). The result is not
/// clamped; crossover runs first, the box clamp after.
std::vector<double> mutate(const Population& pop, std::size_t i,
                           const Candidate& best, const DeConfig& cfg,
                           RandomStream& rng);

/// Truncated geometric segment length on [1, d]: P(L >= l) = p^(l-1).
std::size_t sample_segment_length(double crossover_prob, std::size_t dim,
                                  RandomStream& rng);

/// Copies the length-L segment starting at 1-based position n (wrapping
/// modulo d) from the trial vector, everything else from the target.
std::vector<double> crossover(const std::vector<double>& target,
                              const std::vector<double>& trial, std::size_t n,
                              std::size_t length);

/// Greedy one-to-one selection: the trial wins only on strictly smaller
/// loss; ties keep the incumbent.
const Candidate& select(const Candidate& current, const Candidate& trial);

using GenerationObserver = std::function<void(const Population&)>;

/// Continuous-space DE. The per-generation best used by Best1Greedy is
/// frozen at the generation boundary, making the sweep order-independent.
RunTrace run(const Objective& objective, const SearchSpace& space,
             const DeConfig& cfg, const StopCriteria& criteria,
             RandomStream& rng, const EvalOptions& eval = {},
             const GenerationObserver& observer = {});

}  // namespace dfo::de

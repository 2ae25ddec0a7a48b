#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dfo/objective.hpp"
#include "dfo/random.hpp"
#include "dfo/run_context.hpp"
#include "dfo/search_space.hpp"
#include "dfo/stop.hpp"
#include "dfo/trace.hpp"

namespace dfo::local_search {

/// How nearby points are generated. CoordinateStep and GaussianPerturb apply
/// to boxes, BitFlip to binary spaces. Only CoordinateStep and BitFlip
/// define an enumerable neighborhood; GaussianPerturb is a random proposal
/// for simulated annealing.
struct NeighborhoodSpec {
  enum class Kind { CoordinateStep, BitFlip, GaussianPerturb };
  Kind kind = Kind::CoordinateStep;
  double step = 1.0;
  /// GaussianPerturb stddev; defaults to 0.1 * (upper - lower) of the
  /// perturbed coordinate when unset.
  std::optional<double> stddev;

  static NeighborhoodSpec coordinate_step(double step);
  static NeighborhoodSpec bit_flip();
  static NeighborhoodSpec gaussian_perturb(std::optional<double> stddev = {});
};

/// Geometric cooling: T starts at t_initial and is multiplied by alpha once
/// per iteration, for max_iters iterations.
struct AnnealSchedule {
  double t_initial = 1.0;
  double alpha = 0.99;
  std::size_t max_iters = 10000;

  void validate() const;
};

/// Enumerates the neighborhood: 2*dim coordinate steps (out-of-box ones
/// dropped) or dim single-bit flips. Throws UnsupportedSpaceError on a
/// spec/space mismatch and std::invalid_argument for GaussianPerturb, which
/// has no enumerable neighborhood.
std::vector<std::vector<double>> neighbors(const std::vector<double>& values,
                                           const NeighborhoodSpec& spec,
                                           const SearchSpace& space);

/// Greedy descent: evaluates every neighbor, moves to the strictly best one
/// (ties broken by lowest neighbor index), stops at a local minimum.
RunTrace hill_climb(const Objective& objective, const SearchSpace& space,
                    const NeighborhoodSpec& spec,
                    std::optional<std::vector<double>> start,
                    const StopCriteria& criteria, RandomStream& rng,
                    const EvalOptions& eval = {});

/// Probability of accepting a proposal at temperature t: 1 when the proposal
/// is no worse, exp(-(loss_proposed - loss_current)/t) otherwise.
double acceptance_probability(double loss_current, double loss_proposed,
                              double t);

/// One random proposal per iteration (a Gaussian nudge of one coordinate, or
/// one bit flip), Metropolis-style acceptance, T multiplied by alpha each
/// iteration. The best-ever point is tracked separately from the current one.
RunTrace simulated_annealing(const Objective& objective,
                             const SearchSpace& space,
                             const NeighborhoodSpec& proposal,
                             const AnnealSchedule& schedule,
                             const StopCriteria& criteria, RandomStream& rng,
                             std::optional<std::vector<double>> start = {},
                             const EvalOptions& eval = {});

}  // namespace dfo::local_search

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "dfo/linalg.hpp"
#include "dfo/objective.hpp"
#include "dfo/random.hpp"
#include "dfo/run_context.hpp"
#include "dfo/search_space.hpp"
#include "dfo/stop.hpp"
#include "dfo/trace.hpp"

namespace dfo::es {

enum class Mode { Plus, Comma };
enum class Recombination { Discrete, Intermediate, Weighted };
enum class MateSelection { FitnessIndependent, FitnessBased };

/// Shape of the Gaussian mutation distribution: a sphere (common variance c),
/// an axis-aligned ellipsoid (per-coordinate stddevs), or a freely oriented
/// ellipsoid (full covariance matrix). The shape is fixed for a whole run;
/// adapting it is CMA-ES's job.
struct MutationShape {
  enum class Kind { Isotropic, Diagonal, FullCov };
  Kind kind = Kind::Isotropic;
  double isotropic_variance = 1.0;
  std::vector<double> stddevs;      // Diagonal
  linalg::Matrix covariance;        // FullCov, symmetric positive definite

  static MutationShape isotropic(double variance);
  static MutationShape diagonal(std::vector<double> stddevs);
  static MutationShape full_cov(linalg::Matrix covariance);
};

struct EsConfig {
  std::size_t mu = 5;      // parent population size
  std::size_t rho = 5;     // mates recombined per offspring, 1 <= rho <= mu
  std::size_t lambda = 10; // offspring per generation
  Mode mode = Mode::Plus;  // Comma requires mu <= lambda
  Recombination recombination = Recombination::Intermediate;
  std::vector<double> weights;  // Weighted: length rho, nonincreasing, sum 1
  /// Defaults to Isotropic with stddev 0.1 * max box width when unset.
  std::optional<MutationShape> mutation;
  MateSelection mate_selection = MateSelection::FitnessIndependent;

  void validate(const SearchSpace& space) const;
};

/// Combines rho mates into one offspring vector. Discrete copies each
/// coordinate from a uniformly chosen mate; Intermediate averages;
/// Weighted applies rank weights (mates must be passed best first).
std::vector<double> recombine(const std::vector<std::vector<double>>& parents,
                              Recombination method,
                              const std::vector<double>& weights,
                              RandomStream& rng);

/// Adds a Gaussian perturbation drawn from the shape and clamps to the box.
std::vector<double> mutate(std::vector<double> v, const MutationShape& shape,
                           const SearchSpace& space, RandomStream& rng);

using GenerationObserver = std::function<void(const Population&)>;

/// (mu/rho +, lambda)-ES with static mutation shape.
RunTrace run(const Objective& objective, const SearchSpace& space,
             const EsConfig& cfg, const StopCriteria& criteria,
             RandomStream& rng, const EvalOptions& eval = {},
             const GenerationObserver& observer = {});

}  // namespace dfo::es

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

namespace dfo::pso {

enum class Variant { Binary, Standard, Inertia, Constriction };
enum class Topology { Global, Ring };

struct PsoConfig {
  std::size_t swarm_size = 30;
  double c1 = 2.0;
  double c2 = 2.0;
  /// Velocity bounds. Defaults when unset: +-(upper-lower)/2 per coordinate
  /// on boxes, +-4 on binary spaces (keeps the sigmoid responsive).
  std::optional<double> v_min;
  std::optional<double> v_max;
  Variant variant = Variant::Standard;
  double w_start = 0.9;  // Inertia
  double w_end = 0.4;
  std::size_t t_max = 1000;     // Inertia schedule horizon
  double k_constriction = 1.0;  // Constriction
  Topology topology = Topology::Global;
  std::size_t ring_radius = 1;

  void validate(const SearchSpace& space) const;
};

struct Particle {
  std::vector<double> position;
  std::vector<double> velocity;
  Candidate personal_best;
  std::optional<double> loss;  // current position's loss
};

/// Per-coordinate velocity bounds with config overrides applied.
struct VelocityBounds {
  std::vector<double> lower;
  std::vector<double> upper;
};

VelocityBounds resolve_velocity_bounds(const PsoConfig& cfg,
                                       const SearchSpace& space);

/// Linearly decreasing inertia weight on [0, t_max]:
/// w(t) = (t_max - t)(w_start - w_end)/t_max + w_end.
double inertia_weight(std::size_t iter, const PsoConfig& cfg);

/// chi = 2k / |2 - psi - sqrt(psi^2 - 4 psi)| with psi = c1 + c2. Throws
/// InvalidConstrictionError for psi < 4 (complex-valued square root).
double constriction_coefficient(double c1, double c2, double k);

/// One velocity update. A fresh psi1, psi2 pair is drawn per coordinate (in
/// coordinate order); the result is clamped to the bounds elementwise.
std::vector<double> velocity_update(const Particle& p,
                                    const std::vector<double>& neighbor_best,
                                    const PsoConfig& cfg,
                                    const VelocityBounds& bounds,
                                    std::size_t iter, RandomStream& rng);

/// Continuous: position + velocity, clamped to the box. Binary: every bit
/// re-sampled with P(bit = 1) = sigmoid(velocity), one fresh uniform per bit.
std::vector<double> position_update(const Particle& p,
                                    const std::vector<double>& new_velocity,
                                    const SearchSpace& space, RandomStream& rng);

using IterationObserver = std::function<void(const std::vector<Particle>&)>;

RunTrace run(const Objective& objective, const SearchSpace& space,
             const PsoConfig& cfg, const StopCriteria& criteria,
             RandomStream& rng, const EvalOptions& eval = {},
             const IterationObserver& observer = {});

}  // namespace dfo::pso

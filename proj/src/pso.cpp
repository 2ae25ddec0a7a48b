#include "dfo/pso.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dfo/errors.hpp"

namespace dfo::pso {
namespace {

std::string variant_id(Variant v) {
  switch (v) {
    case Variant::Binary: return "pso-binary";
    case Variant::Standard: return "pso-standard";
    case Variant::Inertia: return "pso-inertia";
    case Variant::Constriction: return "pso-constriction";
  }
  return "pso";
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void PsoConfig::validate(const SearchSpace& space) const {
  if (swarm_size < 1)
    throw std::invalid_argument("PsoConfig: swarm_size >= 1 required");
  if (c1 <= 0.0 || c2 <= 0.0)
    throw std::invalid_argument("PsoConfig: c1, c2 > 0 required");
  if (v_min && v_max && !(*v_min < *v_max))
    throw std::invalid_argument("PsoConfig: v_min < v_max required");
  if (variant == Variant::Constriction)
    constriction_coefficient(c1, c2, k_constriction);  // rejects psi < 4
  if (variant == Variant::Inertia && t_max < 1)
    throw std::invalid_argument("PsoConfig: t_max >= 1 required");
  const bool binary_space = space.is_binary();
  if ((variant == Variant::Binary) != binary_space)
    throw UnsupportedSpaceError(
        "PsoConfig: the binary variant pairs with binary spaces, the "
        "continuous variants with boxes");
  if (topology == Topology::Ring && ring_radius < 1)
    throw std::invalid_argument("PsoConfig: ring_radius >= 1 required");
}

VelocityBounds resolve_velocity_bounds(const PsoConfig& cfg,
                                       const SearchSpace& space) {
  VelocityBounds b;
  b.lower.resize(space.dim());
  b.upper.resize(space.dim());
  for (std::size_t j = 0; j < space.dim(); ++j) {
    const double half = space.is_binary() ? 4.0 : 0.5 * space.width(j);
    b.lower[j] = cfg.v_min ? *cfg.v_min : -half;
    b.upper[j] = cfg.v_max ? *cfg.v_max : half;
  }
  return b;
}

double inertia_weight(std::size_t iter, const PsoConfig& cfg) {
  if (iter > cfg.t_max)
    throw std::invalid_argument("inertia_weight: iter <= t_max required");
  const double t = static_cast<double>(iter);
  const double t_max = static_cast<double>(cfg.t_max);
  return (t_max - t) * (cfg.w_start - cfg.w_end) / t_max + cfg.w_end;
}

double constriction_coefficient(double c1, double c2, double k) {
  if (k <= 0.0)
    throw std::invalid_argument("constriction_coefficient: k > 0 required");
  const double psi = c1 + c2;
  if (psi < 4.0)
    throw InvalidConstrictionError(
        "constriction_coefficient: c1 + c2 >= 4 required for a real root");
  return 2.0 * k / std::abs(2.0 - psi - std::sqrt(psi * psi - 4.0 * psi));
}

std::vector<double> velocity_update(const Particle& p,
                                    const std::vector<double>& neighbor_best,
                                    const PsoConfig& cfg,
                                    const VelocityBounds& bounds,
                                    std::size_t iter, RandomStream& rng) {
  const double w =
      cfg.variant == Variant::Inertia ? inertia_weight(iter, cfg) : 1.0;
  const double chi =
      cfg.variant == Variant::Constriction
          ? constriction_coefficient(cfg.c1, cfg.c2, cfg.k_constriction)
          : 1.0;

  std::vector<double> v(p.velocity.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    // fresh psi1, psi2 per coordinate; a shared per-particle pair confines
    // the particle to the plane spanned by its two pull vectors and stalls
    // convergence in higher dimensions
    const double psi1 = rng.uniform();
    const double psi2 = rng.uniform();
    const double pull =
        cfg.c1 * psi1 * (p.personal_best.values[j] - p.position[j]) +
        cfg.c2 * psi2 * (neighbor_best[j] - p.position[j]);
    v[j] = std::clamp(chi * (w * p.velocity[j] + pull), bounds.lower[j],
                      bounds.upper[j]);
  }
  return v;
}

std::vector<double> position_update(const Particle& p,
                                    const std::vector<double>& new_velocity,
                                    const SearchSpace& space,
                                    RandomStream& rng) {
  std::vector<double> x(p.position.size());
  if (space.is_binary()) {
    for (std::size_t j = 0; j < x.size(); ++j)
      x[j] = rng.uniform() < sigmoid(new_velocity[j]) ? 1.0 : 0.0;
  } else {
    for (std::size_t j = 0; j < x.size(); ++j)
      x[j] = std::clamp(p.position[j] + new_velocity[j], space.lower()[j],
                        space.upper()[j]);
  }
  return x;
}

RunTrace run(const Objective& objective, const SearchSpace& space,
             const PsoConfig& cfg, const StopCriteria& criteria,
             RandomStream& rng, const EvalOptions& eval,
             const IterationObserver& observer) {
  cfg.validate(space);
  const VelocityBounds bounds = resolve_velocity_bounds(cfg, space);
  RunContext ctx(variant_id(cfg.variant), objective, space, criteria,
                 rng.seed(), eval);
  return detail::drive(ctx, [&]() -> StopReason {
    std::vector<Particle> swarm(cfg.swarm_size);
    for (Particle& p : swarm) {
      p.position = sample_uniform(space, rng).values;
      p.velocity.assign(space.dim(), 0.0);
    }

    for (std::size_t iter = 0;; ++iter) {
      std::vector<std::vector<double>> positions;
      positions.reserve(swarm.size());
      for (const Particle& p : swarm) positions.push_back(p.position);
      const std::vector<double> losses = ctx.evaluate_batch(positions);

      for (std::size_t i = 0; i < swarm.size(); ++i) {
        swarm[i].loss = losses[i];
        if (!swarm[i].personal_best.loss ||
            losses[i] < *swarm[i].personal_best.loss) {
          swarm[i].personal_best.values = swarm[i].position;
          swarm[i].personal_best.loss = losses[i];
        }
      }

      // Neighborhood bests are a snapshot taken before any update.
      std::vector<std::vector<double>> neighbor_best(swarm.size());
      if (cfg.topology == Topology::Global) {
        std::size_t g = 0;
        for (std::size_t i = 1; i < swarm.size(); ++i)
          if (*swarm[i].personal_best.loss < *swarm[g].personal_best.loss)
            g = i;
        for (std::size_t i = 0; i < swarm.size(); ++i)
          neighbor_best[i] = swarm[g].personal_best.values;
      } else {
        const auto n = static_cast<std::int64_t>(swarm.size());
        for (std::int64_t i = 0; i < n; ++i) {
          std::size_t local = static_cast<std::size_t>(i);
          for (std::int64_t off = -static_cast<std::int64_t>(cfg.ring_radius);
               off <= static_cast<std::int64_t>(cfg.ring_radius); ++off) {
            const auto k = static_cast<std::size_t>(((i + off) % n + n) % n);
            if (*swarm[k].personal_best.loss <
                *swarm[local].personal_best.loss)
              local = k;
          }
          neighbor_best[i] = swarm[local].personal_best.values;
        }
      }

      for (std::size_t i = 0; i < swarm.size(); ++i) {
        swarm[i].velocity =
            velocity_update(swarm[i], neighbor_best[i], cfg, bounds, iter, rng);
        swarm[i].position =
            position_update(swarm[i], swarm[i].velocity, space, rng);
      }

      if (observer) observer(swarm);
      ctx.end_iteration();
      if (cfg.variant == Variant::Inertia && iter == cfg.t_max)
        return StopReason::ScheduleComplete;  // schedule defined on [0, t_max]
    }
  });
}

}  // namespace dfo::pso

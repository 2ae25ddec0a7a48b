#include "dfo/es.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dfo/errors.hpp"
#include "dfo/ga.hpp"

namespace dfo::es {
namespace {

/// Returns B * diag(sqrt(values)) so that A A^T reconstructs the input.
linalg::Matrix covariance_factor(const linalg::Matrix& cov) {
  const auto eig = linalg::eigen_symmetric(cov);
  for (double v : eig.values) {
    if (!(v > 0.0))
      throw std::invalid_argument("es: covariance must be positive definite");
  }
  linalg::Matrix a = eig.vectors;
  for (std::size_t j = 0; j < a.cols; ++j) {
    const double d = std::sqrt(eig.values[j]);
    for (std::size_t i = 0; i < a.rows; ++i) a(i, j) *= d;
  }
  return a;
}

/// Draws `count` distinct parent indices. With uniform selection every
/// remaining index is equally likely; with fitness-based selection the draw
/// is proportional to `probs`, renormalized over the unchosen indices.
std::vector<std::size_t> draw_mates(std::size_t mu, std::size_t count,
                                    const std::vector<double>* probs,
                                    RandomStream& rng) {
  std::vector<std::size_t> picked;
  picked.reserve(count);
  std::vector<bool> taken(mu, false);
  for (std::size_t t = 0; t < count; ++t) {
    if (!probs) {
      // uniform over the mu - t remaining indices
      auto r = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(mu - t) - 1));
      for (std::size_t i = 0; i < mu; ++i) {
        if (taken[i]) continue;
        if (r == 0) {
          picked.push_back(i);
          taken[i] = true;
          break;
        }
        --r;
      }
    } else {
      double remaining = 0.0;
      for (std::size_t i = 0; i < mu; ++i)
        if (!taken[i]) remaining += (*probs)[i];
      const double u = rng.uniform() * remaining;
      double cum = 0.0;
      std::size_t chosen = mu;
      for (std::size_t i = 0; i < mu; ++i) {
        if (taken[i]) continue;
        cum += (*probs)[i];
        if (u < cum) {
          chosen = i;
          break;
        }
        chosen = i;  // rounding residue lands on the last free index
      }
      picked.push_back(chosen);
      taken[chosen] = true;
    }
  }
  return picked;
}

}  // namespace

MutationShape MutationShape::isotropic(double variance) {
  if (variance <= 0.0)
    throw std::invalid_argument("MutationShape: variance > 0 required");
  MutationShape s;
  s.kind = Kind::Isotropic;
  s.isotropic_variance = variance;
  return s;
}

MutationShape MutationShape::diagonal(std::vector<double> stddevs) {
  for (double sd : stddevs) {
    if (sd <= 0.0)
      throw std::invalid_argument("MutationShape: stddevs > 0 required");
  }
  MutationShape s;
  s.kind = Kind::Diagonal;
  s.stddevs = std::move(stddevs);
  return s;
}

MutationShape MutationShape::full_cov(linalg::Matrix covariance) {
  if (covariance.rows != covariance.cols)
    throw std::invalid_argument("MutationShape: covariance must be square");
  if (linalg::max_abs_asymmetry(covariance) > 1e-10)
    throw std::invalid_argument("MutationShape: covariance must be symmetric");
  MutationShape s;
  s.kind = Kind::FullCov;
  s.covariance = std::move(covariance);
  return s;
}

void EsConfig::validate(const SearchSpace& space) const {
  if (mu < 1 || lambda < 1)
    throw std::invalid_argument("EsConfig: mu, lambda >= 1 required");
  if (rho < 1 || rho > mu)
    throw std::invalid_argument("EsConfig: 1 <= rho <= mu required");
  if (mode == Mode::Comma && mu > lambda)
    throw std::invalid_argument("EsConfig: comma mode requires mu <= lambda");
  if (recombination == Recombination::Weighted) {
    if (weights.size() != rho)
      throw std::invalid_argument("EsConfig: weighted recombination needs rho weights");
    double sum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] < 0.0)
        throw std::invalid_argument("EsConfig: weights must be nonnegative");
      if (i > 0 && weights[i] > weights[i - 1])
        throw std::invalid_argument("EsConfig: weights must be nonincreasing");
      sum += weights[i];
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("EsConfig: weights must sum to 1");
  }
  if (mutation && mutation->kind == MutationShape::Kind::Diagonal &&
      mutation->stddevs.size() != space.dim())
    throw std::invalid_argument("EsConfig: diagonal stddevs must match dim");
  if (mutation && mutation->kind == MutationShape::Kind::FullCov &&
      mutation->covariance.rows != space.dim())
    throw std::invalid_argument("EsConfig: covariance must match dim");
}

std::vector<double> recombine(const std::vector<std::vector<double>>& parents,
                              Recombination method,
                              const std::vector<double>& weights,
                              RandomStream& rng) {
  if (parents.empty())
    throw EmptyPopulationError("recombine: empty parent set");
  const std::size_t dim = parents.front().size();
  std::vector<double> child(dim, 0.0);
  switch (method) {
    case Recombination::Discrete:
      for (std::size_t j = 0; j < dim; ++j) {
        const auto k = static_cast<std::size_t>(rng.uniform_int(
            0, static_cast<std::int64_t>(parents.size()) - 1));
        child[j] = parents[k][j];
      }
      break;
    case Recombination::Intermediate:
      for (const auto& p : parents)
        for (std::size_t j = 0; j < dim; ++j) child[j] += p[j];
      for (double& v : child) v /= static_cast<double>(parents.size());
      break;
    case Recombination::Weighted:
      if (weights.size() != parents.size())
        throw std::invalid_argument("recombine: one weight per parent required");
      for (std::size_t k = 0; k < parents.size(); ++k)
        for (std::size_t j = 0; j < dim; ++j)
          child[j] += weights[k] * parents[k][j];
      break;
  }
  return child;
}

std::vector<double> mutate(std::vector<double> v, const MutationShape& shape,
                           const SearchSpace& space, RandomStream& rng) {
  const std::size_t dim = v.size();
  switch (shape.kind) {
    case MutationShape::Kind::Isotropic: {
      const double sd = std::sqrt(shape.isotropic_variance);
      for (double& x : v) x += sd * rng.normal();
      break;
    }
    case MutationShape::Kind::Diagonal:
      if (shape.stddevs.size() != dim)
        throw std::invalid_argument("es::mutate: stddev length mismatch");
      for (std::size_t j = 0; j < dim; ++j) v[j] += shape.stddevs[j] * rng.normal();
      break;
    case MutationShape::Kind::FullCov: {
      const linalg::Matrix a = covariance_factor(shape.covariance);
      std::vector<double> z(dim);
      for (double& zj : z) zj = rng.normal();
      const std::vector<double> eps = linalg::matvec(a, z);
      for (std::size_t j = 0; j < dim; ++j) v[j] += eps[j];
      break;
    }
  }
  for (std::size_t j = 0; j < dim; ++j)
    v[j] = std::clamp(v[j], space.lower()[j], space.upper()[j]);
  return v;
}

RunTrace run(const Objective& objective, const SearchSpace& space,
             const EsConfig& cfg, const StopCriteria& criteria,
             RandomStream& rng, const EvalOptions& eval,
             const GenerationObserver& observer) {
  if (space.is_binary())
    throw UnsupportedSpaceError("es::run: ES is defined on continuous spaces");
  cfg.validate(space);
  const MutationShape shape =
      cfg.mutation ? *cfg.mutation
                   : MutationShape::isotropic(
                         0.01 * space.max_width() * space.max_width());

  RunContext ctx("es", objective, space, criteria, rng.seed(), eval);
  return detail::drive(ctx, [&]() -> StopReason {
    Population parents;
    parents.members.reserve(cfg.mu);
    for (std::size_t i = 0; i < cfg.mu; ++i)
      parents.members.push_back(sample_uniform(space, rng));
    ctx.evaluate_population(parents);
    parents.sort_by_loss();
    if (observer) observer(parents);

    for (;;) {
      std::optional<std::vector<double>> mate_probs;
      if (cfg.mate_selection == MateSelection::FitnessBased) {
        std::vector<double> losses(parents.size());
        for (std::size_t i = 0; i < parents.size(); ++i)
          losses[i] = *parents[i].loss;
        mate_probs = ga::selection_probabilities(losses);
      }

      Population offspring;
      offspring.members.reserve(cfg.lambda);
      for (std::size_t o = 0; o < cfg.lambda; ++o) {
        std::vector<std::size_t> mates = draw_mates(
            cfg.mu, cfg.rho, mate_probs ? &*mate_probs : nullptr, rng);
        // rank order for weighted recombination (parents are sorted, so
        // sorting the indices sorts the mates by loss)
        std::sort(mates.begin(), mates.end());
        std::vector<std::vector<double>> mate_values;
        mate_values.reserve(mates.size());
        for (std::size_t m : mates) mate_values.push_back(parents[m].values);
        std::vector<double> child =
            recombine(mate_values, cfg.recombination, cfg.weights, rng);
        offspring.members.push_back(
            {mutate(std::move(child), shape, space, rng), std::nullopt});
      }
      ctx.evaluate_population(offspring);

      Population pool;
      if (cfg.mode == Mode::Plus) {
        pool.members.reserve(parents.size() + offspring.size());
        for (auto& c : parents.members) pool.members.push_back(std::move(c));
        for (auto& c : offspring.members) pool.members.push_back(std::move(c));
      } else {
        pool = std::move(offspring);
      }
      pool.sort_by_loss();  // stable: ties resolved by insertion order
      pool.members.resize(cfg.mu);
      parents = std::move(pool);
      if (observer) observer(parents);
      ctx.end_iteration();
    }
  });
}

}  // namespace dfo::es

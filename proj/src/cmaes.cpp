#include "dfo/cmaes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dfo/errors.hpp"

namespace dfo::cmaes {

ResolvedCmaConfig resolve(const CmaConfig& cfg, const SearchSpace& space) {
  if (space.is_binary())
    throw UnsupportedSpaceError("cmaes: continuous spaces only");
  const double d = static_cast<double>(space.dim());

  ResolvedCmaConfig r;
  r.lambda = cfg.lambda ? *cfg.lambda
                        : 4 + static_cast<std::size_t>(std::floor(3.0 * std::log(d)));
  if (r.lambda < 2) throw std::invalid_argument("cmaes: lambda >= 2 required");
  r.mu = cfg.mu ? *cfg.mu : r.lambda / 2;
  if (r.mu < 1 || r.mu > r.lambda)
    throw std::invalid_argument("cmaes: 1 <= mu <= lambda required");

  if (cfg.weights) {
    r.weights = *cfg.weights;
    if (r.weights.size() != r.mu)
      throw std::invalid_argument("cmaes: one weight per selected parent required");
  } else {
    r.weights.resize(r.mu);
    for (std::size_t i = 0; i < r.mu; ++i) {
      r.weights[i] = std::log(static_cast<double>(r.mu) + 1.0) -
                     std::log(static_cast<double>(i) + 1.0);
    }
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < r.weights.size(); ++i) {
    if (r.weights[i] < 0.0)
      throw std::invalid_argument("cmaes: weights must be nonnegative");
    if (i > 0 && r.weights[i] > r.weights[i - 1])
      throw std::invalid_argument("cmaes: weights must be nonincreasing");
    sum += r.weights[i];
  }
  if (sum <= 0.0) throw std::invalid_argument("cmaes: weights must sum > 0");
  double sq = 0.0;
  for (double& w : r.weights) {
    w /= sum;
    sq += w * w;
  }
  r.mu_eff = 1.0 / sq;

  r.c_m = cfg.c_m;
  if (r.c_m <= 0.0 || r.c_m > 1.0)
    throw std::invalid_argument("cmaes: 0 < c_m <= 1 required");
  r.c_sigma = cfg.c_sigma ? *cfg.c_sigma : (r.mu_eff + 2.0) / (d + r.mu_eff + 5.0);
  r.d_sigma = cfg.d_sigma ? *cfg.d_sigma : 1.0 + r.c_sigma;
  r.c_c = cfg.c_c ? *cfg.c_c : 4.0 / (d + 4.0);
  r.c_1 = cfg.c_1 ? *cfg.c_1 : 2.0 / ((d + 1.3) * (d + 1.3) + r.mu_eff);
  r.c_mu = cfg.c_mu
               ? *cfg.c_mu
               : std::min(1.0 - r.c_1,
                          2.0 * (r.mu_eff - 2.0 + 1.0 / r.mu_eff) /
                              ((d + 2.0) * (d + 2.0) + r.mu_eff));
  if (r.c_sigma <= 0.0 || r.c_sigma >= 1.0)
    throw std::invalid_argument("cmaes: 0 < c_sigma < 1 required");
  if (r.c_c <= 0.0 || r.c_c > 1.0)
    throw std::invalid_argument("cmaes: 0 < c_c <= 1 required");
  if (r.c_1 < 0.0 || r.c_mu < 0.0 || r.c_1 + r.c_mu > 1.0)
    throw std::invalid_argument("cmaes: c_1 + c_mu <= 1 required");
  if (r.d_sigma <= 0.0)
    throw std::invalid_argument("cmaes: d_sigma > 0 required");

  r.sigma0 = cfg.sigma0 ? *cfg.sigma0 : 0.3 * space.max_width();
  if (r.sigma0 <= 0.0)
    throw std::invalid_argument("cmaes: sigma0 > 0 required");
  return r;
}

CmaState CmaState::initial(const SearchSpace& space, double sigma0) {
  CmaState s;
  const std::size_t d = space.dim();
  s.mean.resize(d);
  for (std::size_t j = 0; j < d; ++j)
    s.mean[j] = 0.5 * (space.lower()[j] + space.upper()[j]);
  s.sigma = sigma0;
  s.cov = linalg::Matrix::identity(d);
  s.path_c.assign(d, 0.0);
  s.path_sigma.assign(d, 0.0);
  s.refactorize();
  return s;
}

void CmaState::refactorize() {
  linalg::EigenDecomposition eig;
  try {
    eig = linalg::eigen_symmetric(cov);
  } catch (const std::invalid_argument& e) {
    throw CovarianceDegenerateError(std::string("cmaes: factorization failed: ") +
                                    e.what());
  }
  for (double v : eig.values) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw CovarianceDegenerateError(
          "cmaes: covariance lost positive definiteness");
  }
  basis = std::move(eig.vectors);
  scale.resize(eig.values.size());
  for (std::size_t j = 0; j < scale.size(); ++j)
    scale[j] = std::sqrt(eig.values[j]);
}

std::vector<double> CmaState::whiten(const std::vector<double>& v) const {
  const std::size_t d = v.size();
  // basis^T v, scaled by 1/D, rotated back
  std::vector<double> tmp(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += basis(i, j) * v[i];
    tmp[j] = s / scale[j];
  }
  std::vector<double> out(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += basis(i, j) * tmp[j];
    out[i] = s;
  }
  return out;
}

Population sample(const CmaState& state, std::size_t lambda, RandomStream& rng,
                  std::vector<std::vector<double>>* z_out) {
  const std::size_t d = state.mean.size();
  Population pop;
  pop.members.resize(lambda);
  if (z_out) z_out->assign(lambda, {});
  for (std::size_t i = 0; i < lambda; ++i) {
    std::vector<double> z(d);
    for (double& zj : z) zj = rng.normal();
    std::vector<double> scaled(d);
    for (std::size_t j = 0; j < d; ++j) scaled[j] = state.scale[j] * z[j];
    std::vector<double>& x = pop.members[i].values;
    x.assign(d, 0.0);
    for (std::size_t r = 0; r < d; ++r) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += state.basis(r, j) * scaled[j];
      x[r] = state.mean[r] + state.sigma * s;
    }
    if (z_out) (*z_out)[i] = std::move(z);
  }
  return pop;
}

std::vector<double> update_mean(const CmaState& state,
                                const std::vector<std::vector<double>>& top_mu,
                                const ResolvedCmaConfig& cfg) {
  if (top_mu.size() != cfg.mu)
    throw std::invalid_argument("update_mean: exactly mu candidates required");
  const std::size_t d = state.mean.size();
  std::vector<double> m = state.mean;
  for (std::size_t i = 0; i < top_mu.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j)
      m[j] += cfg.c_m * cfg.weights[i] * (top_mu[i][j] - state.mean[j]);
  }
  return m;
}

std::pair<std::vector<double>, std::vector<double>> update_paths(
    const CmaState& state, const std::vector<double>& new_mean,
    const ResolvedCmaConfig& cfg) {
  const std::size_t d = state.mean.size();
  std::vector<double> step(d);
  for (std::size_t j = 0; j < d; ++j)
    step[j] = (new_mean[j] - state.mean[j]) / state.sigma;

  const double norm_c = std::sqrt(cfg.c_c * (2.0 - cfg.c_c) * cfg.mu_eff);
  const double norm_s = std::sqrt(cfg.c_sigma * (2.0 - cfg.c_sigma) * cfg.mu_eff);
  const std::vector<double> whitened = state.whiten(step);

  std::vector<double> pc(d);
  std::vector<double> ps(d);
  for (std::size_t j = 0; j < d; ++j) {
    pc[j] = (1.0 - cfg.c_c) * state.path_c[j] + norm_c * step[j];
    ps[j] = (1.0 - cfg.c_sigma) * state.path_sigma[j] + norm_s * whitened[j];
  }
  return {std::move(pc), std::move(ps)};
}

linalg::Matrix update_cov(const CmaState& state,
                          const std::vector<std::vector<double>>& top_mu,
                          const std::vector<double>& new_mean,
                          const std::vector<double>& new_path_c,
                          const ResolvedCmaConfig& cfg) {
  if (top_mu.size() != cfg.mu)
    throw std::invalid_argument("update_cov: exactly mu candidates required");
  const std::size_t d = state.mean.size();
  const double weight_sum =
      std::accumulate(cfg.weights.begin(), cfg.weights.end(), 0.0);
  const double decay = 1.0 - cfg.c_1 - cfg.c_mu * weight_sum;

  linalg::Matrix c(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double val = decay * state.cov(i, j) +
                   cfg.c_1 * new_path_c[i] * new_path_c[j];
      for (std::size_t k = 0; k < top_mu.size(); ++k) {
        val += cfg.c_mu * cfg.weights[k] * (top_mu[k][i] - new_mean[i]) *
               (top_mu[k][j] - new_mean[j]);
      }
      c(i, j) = val;
    }
  }
  linalg::symmetrize(c);  // kills rounding drift
  return c;
}

double expected_normal_norm(std::size_t dim) {
  const double d = static_cast<double>(dim);
  return std::sqrt(d) * (1.0 - 1.0 / (4.0 * d) + 1.0 / (21.0 * d * d));
}

double update_sigma(const CmaState& state,
                    const std::vector<double>& new_path_sigma,
                    const ResolvedCmaConfig& cfg, std::size_t dim) {
  double norm_sq = 0.0;
  for (double v : new_path_sigma) norm_sq += v * v;
  const double ratio = std::sqrt(norm_sq) / expected_normal_norm(dim);
  return state.sigma * std::exp((cfg.c_sigma / cfg.d_sigma) * (ratio - 1.0));
}

RunTrace run(const Objective& objective, const SearchSpace& space,
             const CmaConfig& cfg, const StopCriteria& criteria,
             RandomStream& rng, const EvalOptions& eval,
             const GenerationObserver& observer) {
  const ResolvedCmaConfig rc = resolve(cfg, space);
  RunContext ctx("cma-es", objective, space, criteria, rng.seed(), eval);
  try {
    return detail::drive(ctx, [&]() -> StopReason {
      CmaState state = CmaState::initial(space, rc.sigma0);
      for (;;) {
        Population raw = sample(state, rc.lambda, rng);

        // Clamping applies only to the vectors handed to the objective; the
        // raw samples feed the updates so the Gaussian model stays intact.
        std::vector<std::vector<double>> feasible(rc.lambda);
        for (std::size_t i = 0; i < rc.lambda; ++i)
          feasible[i] = clamp(space, raw[i].values);
        const std::vector<double> losses = ctx.evaluate_batch(feasible);

        std::vector<std::size_t> order(rc.lambda);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&losses](std::size_t a, std::size_t b) {
                           return losses[a] < losses[b];
                         });
        std::vector<std::vector<double>> top_mu(rc.mu);
        for (std::size_t k = 0; k < rc.mu; ++k)
          top_mu[k] = raw[order[k]].values;

        const std::vector<double> new_mean = update_mean(state, top_mu, rc);
        auto [new_pc, new_ps] = update_paths(state, new_mean, rc);
        linalg::Matrix new_cov = update_cov(state, top_mu, new_mean, new_pc, rc);
        const double new_sigma = update_sigma(state, new_ps, rc, space.dim());

        state.mean = new_mean;
        state.path_c = std::move(new_pc);
        state.path_sigma = std::move(new_ps);
        state.cov = std::move(new_cov);
        state.sigma = new_sigma;
        state.refactorize();
        ++state.generation;

        if (observer) observer(state);
        ctx.end_iteration();
      }
    });
  } catch (const CovarianceDegenerateError&) {
    return ctx.finish(StopReason::CovarianceDegenerate);
  }
}

}  // namespace dfo::cmaes

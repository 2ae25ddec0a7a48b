#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "dfo/linalg.hpp"
#include "dfo/objective.hpp"
#include "dfo/random.hpp"
#include "dfo/run_context.hpp"
#include "dfo/search_space.hpp"
#include "dfo/stop.hpp"
#include "dfo/trace.hpp"

namespace dfo::cmaes {

/// Every field is optional; unset fields resolve to the standard settings
/// for the problem dimension (see resolve()).
struct CmaConfig {
  std::optional<std::size_t> lambda;          // default 4 + floor(3 ln d)
  std::optional<std::size_t> mu;              // default floor(lambda / 2)
  std::optional<std::vector<double>> weights; // default log-rank, normalized
  double c_m = 1.0;                           // mean learning rate, <= 1
  std::optional<double> c_sigma;              // step-path weight, < 1
  std::optional<double> d_sigma;              // damping, about 1
  std::optional<double> c_c;                  // covariance-path weight, <= 1
  std::optional<double> c_1;                  // rank-one weight
  std::optional<double> c_mu;                 // rank-mu weight
  std::optional<double> sigma0;               // default 0.3 * max box width
};

/// Concrete coefficient set used by the update equations.
struct ResolvedCmaConfig {
  std::size_t lambda = 0;
  std::size_t mu = 0;
  std::vector<double> weights;  // length mu, nonincreasing, sum 1
  double mu_eff = 0.0;          // (sum w_i^2)^-1
  double c_m = 1.0;
  double c_sigma = 0.0;
  double d_sigma = 0.0;
  double c_c = 0.0;
  double c_1 = 0.0;
  double c_mu = 0.0;
  double sigma0 = 0.0;
};

ResolvedCmaConfig resolve(const CmaConfig& cfg, const SearchSpace& space);

/// Search-distribution state: sampling is m + sigma * N(0, C) with the
/// cached factorization C = basis * diag(scale^2) * basis^T.
struct CmaState {
  std::vector<double> mean;
  double sigma = 1.0;
  linalg::Matrix cov;
  std::vector<double> path_c;      // covariance evolution path
  std::vector<double> path_sigma;  // conjugate evolution path
  std::size_t generation = 0;

  linalg::Matrix basis;        // B, eigenvector columns
  std::vector<double> scale;   // D, sqrt of eigenvalues

  static CmaState initial(const SearchSpace& space, double sigma0);

  /// Refreshes (basis, scale) from cov. Throws CovarianceDegenerateError when
  /// an eigenvalue is not strictly positive or the factorization fails.
  void refactorize();

  /// C^(-1/2) v = basis * diag(1/scale) * basis^T * v.
  std::vector<double> whiten(const std::vector<double>& v) const;
};

/// Draws lambda candidates theta_i = m + sigma * B * (D .* z_i); losses are
/// left unset and positions are NOT clamped (the run loop clamps only the
/// copy passed to the objective). The standard-normal draws are written to
/// *z_out when provided.
Population sample(const CmaState& state, std::size_t lambda, RandomStream& rng,
                  std::vector<std::vector<double>>* z_out = nullptr);

/// m' = m + c_m * sum_i w_i (theta_i - m), over the mu best (sorted
/// ascending by loss).
std::vector<double> update_mean(const CmaState& state,
                                const std::vector<std::vector<double>>& top_mu,
                                const ResolvedCmaConfig& cfg);

/// Evolution-path updates driven by the mean displacement (m' - m)/sigma;
/// the conjugate path is whitened through C^(-1/2). Returns (path_c,
/// path_sigma).
std::pair<std::vector<double>, std::vector<double>> update_paths(
    const CmaState& state, const std::vector<double>& new_mean,
    const ResolvedCmaConfig& cfg);

/// C' = (1 - c_1 - c_mu sum w) C + c_1 p p^T
///      + c_mu sum_i w_i (theta_i - m')(theta_i - m')^T, symmetrized.
linalg::Matrix update_cov(const CmaState& state,
                          const std::vector<std::vector<double>>& top_mu,
                          const std::vector<double>& new_mean,
                          const std::vector<double>& new_path_c,
                          const ResolvedCmaConfig& cfg);

/// sigma' = sigma * exp((c_sigma/d_sigma)(|q| / E|N(0,I)| - 1)).
double update_sigma(const CmaState& state,
                    const std::vector<double>& new_path_sigma,
                    const ResolvedCmaConfig& cfg, std::size_t dim);

/// E|N(0,I)| in dimension d: sqrt(d) (1 - 1/(4d) + 1/(21 d^2)).
double expected_normal_norm(std::size_t dim);

using GenerationObserver = std::function<void(const CmaState&)>;

/// CMA-ES on a continuous box. Covariance degeneration ends the run with a
/// partial trace (stop_reason CovarianceDegenerate).
RunTrace run(const Objective& objective, const SearchSpace& space,
             const CmaConfig& cfg, const StopCriteria& criteria,
             RandomStream& rng, const EvalOptions& eval = {},
             const GenerationObserver& observer = {});

}  // namespace dfo::cmaes

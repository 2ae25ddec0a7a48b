#include "dfo/benchmarks.hpp"

#include <cmath>
#include <numbers>

#include "dfo/errors.hpp"

namespace dfo::bench {
namespace {

double sphere(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double rosenbrock(const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < x.size(); ++j) {
    const double a = x[j + 1] - x[j] * x[j];
    const double b = 1.0 - x[j];
    s += 100.0 * a * a + b * b;
  }
  return s;
}

double rastrigin(const std::vector<double>& x) {
  double s = 10.0 * static_cast<double>(x.size());
  for (double v : x)
    s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
  return s;
}

double ackley(const std::vector<double>& x) {
  const double d = static_cast<double>(x.size());
  double sum_sq = 0.0;
  double sum_cos = 0.0;
  for (double v : x) {
    sum_sq += v * v;
    sum_cos += std::cos(2.0 * std::numbers::pi * v);
  }
  return -20.0 * std::exp(-0.2 * std::sqrt(sum_sq / d)) -
         std::exp(sum_cos / d) + 20.0 + std::numbers::e;
}

double onemax_loss(const std::vector<double>& x) {
  double ones = 0.0;
  for (double v : x) ones += v;
  return static_cast<double>(x.size()) - ones;
}

std::vector<double> zeros(std::size_t dim) { return std::vector<double>(dim, 0.0); }
std::vector<double> ones(std::size_t dim) { return std::vector<double>(dim, 1.0); }

}  // namespace

SearchSpace BenchmarkFunction::default_space(std::size_t dim) const {
  if (dim < min_dim)
    throw ConfigError("function '" + name + "' requires dim >= " +
                      std::to_string(min_dim));
  if (space_kind == SearchSpace::Kind::BinaryHypercube)
    return SearchSpace::binary(dim);
  return SearchSpace::continuous(dim, default_lower, default_upper);
}

const std::vector<BenchmarkFunction>& all_benchmarks() {
  static const std::vector<BenchmarkFunction> registry = {
      {"sphere", SearchSpace::Kind::ContinuousBox, -5.12, 5.12, 1, sphere,
       zeros, 0.0},
      {"rosenbrock", SearchSpace::Kind::ContinuousBox, -2.048, 2.048, 2,
       rosenbrock, ones, 0.0},
      {"rastrigin", SearchSpace::Kind::ContinuousBox, -5.12, 5.12, 1,
       rastrigin, zeros, 0.0},
      {"ackley", SearchSpace::Kind::ContinuousBox, -32.768, 32.768, 1, ackley,
       zeros, 0.0},
      {"onemax", SearchSpace::Kind::BinaryHypercube, 0.0, 0.0, 1, onemax_loss,
       ones, 0.0},
  };
  return registry;
}

const BenchmarkFunction& find_benchmark(const std::string& name) {
  for (const BenchmarkFunction& fn : all_benchmarks()) {
    if (fn.name == name) return fn;
  }
  throw ConfigError("unknown function '" + name + "'");
}

double eval_benchmark(const std::string& name, const std::vector<double>& x) {
  return find_benchmark(name).objective(x);
}

}  // namespace dfo::bench

#pragma once

#include <string>
#include <vector>

#include "dfo/objective.hpp"
#include "dfo/search_space.hpp"

namespace dfo::bench {

/// One benchmark function: its objective, its conventional test domain and
/// (when analytically known) the global minimum.
struct BenchmarkFunction {
  std::string name;
  SearchSpace::Kind space_kind;
  double default_lower = 0.0;  // per coordinate, continuous functions only
  double default_upper = 0.0;
  std::size_t min_dim = 1;
  Objective objective;
  std::vector<double> (*minimum_location)(std::size_t dim) = nullptr;
  double minimum_loss = 0.0;

  SearchSpace default_space(std::size_t dim) const;
};

const std::vector<BenchmarkFunction>& all_benchmarks();

/// Lookup by name ("sphere", "rosenbrock", "rastrigin", "ackley", "onemax").
/// Throws ConfigError for unknown names.
const BenchmarkFunction& find_benchmark(const std::string& name);

/// Evaluates one benchmark at x (dimension taken from x).
double eval_benchmark(const std::string& name, const std::vector<double>& x);

}  // namespace dfo::bench

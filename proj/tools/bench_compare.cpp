// Timing comparison between the serial reference evaluation kernel and the
// OpenMP kernel, and between serial and parallel seed fan-out. Results are
// bit-identical by construction; this tool reports the wall-clock cost.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "dfo/benchmarks.hpp"
#include "dfo/experiment.hpp"
#include "dfo/random.hpp"
#include "dfo/run_context.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Rastrigin with an inflated inner loop, standing in for an expensive
// objective so the kernel overhead is visible.
double heavy_objective(const std::vector<double>& x) {
  double total = 0.0;
  for (int rep = 0; rep < 200; ++rep)
    total += dfo::bench::eval_benchmark("rastrigin", x) * 1e-6;
  return total;
}

void compare_kernels() {
  const std::size_t batch = 512;
  const std::size_t dim = 64;
  dfo::RandomStream rng(7);
  std::vector<std::vector<double>> xs(batch, std::vector<double>(dim));
  for (auto& x : xs)
    for (double& v : x) v = rng.uniform(-5.12, 5.12);

  std::vector<double> serial(batch);
  std::vector<double> parallel(batch);

  auto t0 = Clock::now();
  dfo::detail::eval_kernel_serial(heavy_objective, xs, batch, serial);
  const double serial_ms = ms_since(t0);

  t0 = Clock::now();
  dfo::detail::eval_kernel_parallel(heavy_objective, xs, batch, parallel);
  const double parallel_ms = ms_since(t0);

  bool identical = true;
  for (std::size_t i = 0; i < batch; ++i)
    if (serial[i] != parallel[i]) identical = false;

  std::printf("%-28s %10.1f ms %10.1f ms  x%.2f  identical=%s\n",
              "batch evaluation kernel", serial_ms, parallel_ms,
              serial_ms / parallel_ms, identical ? "yes" : "no");
}

void compare_seed_fanout() {
  dfo::ExperimentConfig cfg;
  cfg.algorithm_id = "cma-es";
  cfg.function_name = "rastrigin";
  cfg.dimension = 20;
  cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8};
  cfg.criteria.max_evals = 20000;

  cfg.parallel_seeds = false;
  auto t0 = Clock::now();
  const auto serial = dfo::run_experiment(cfg);
  const double serial_ms = ms_since(t0);

  cfg.parallel_seeds = true;
  t0 = Clock::now();
  const auto parallel = dfo::run_experiment(cfg);
  const double parallel_ms = ms_since(t0);

  bool identical = serial.size() == parallel.size();
  for (std::size_t i = 0; identical && i < serial.size(); ++i) {
    identical = serial[i].total_evals == parallel[i].total_evals &&
                serial[i].best.loss == parallel[i].best.loss &&
                serial[i].history.size() == parallel[i].history.size();
  }

  std::printf("%-28s %10.1f ms %10.1f ms  x%.2f  identical=%s\n",
              "seed fan-out (8 runs)", serial_ms, parallel_ms,
              serial_ms / parallel_ms, identical ? "yes" : "no");
}

}  // namespace

int main() {
  std::printf("%-28s %13s %13s\n", "workload", "serial", "openmp");
  compare_kernels();
  compare_seed_fanout();
  return 0;
}

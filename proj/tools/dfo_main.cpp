// Command-line front end: runs benchmark experiments from a config file
// (plus flag overrides) and writes seeded convergence traces as CSV.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dfo/benchmarks.hpp"
#include "dfo/errors.hpp"
#include "dfo/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitRuntimeError = 2;
constexpr int kExitIoError = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dfo::IoError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_command(const std::string& config_path, const std::string& algo,
                const std::string& fn, std::optional<std::size_t> dim,
                std::optional<std::uint64_t> seed,
                std::optional<std::size_t> max_evals, const std::string& out) {
  dfo::ExperimentConfig cfg;
  if (!config_path.empty()) {
    cfg = dfo::parse_config(read_file(config_path));
  } else {
    if (algo.empty() || fn.empty() || !dim)
      throw dfo::ConfigError("without --config, --algo, --fn and --dim are required");
  }
  // Flag overrides win over the config file. Routing them through the text
  // parser keeps one validation path.
  std::ostringstream overrides;
  if (!algo.empty()) overrides << "algo.id = " << algo << "\n";
  if (!fn.empty()) overrides << "fn.name = " << fn << "\n";
  if (dim) overrides << "fn.dim = " << *dim << "\n";
  if (seed) overrides << "run.seeds = " << *seed << "\n";
  if (max_evals) overrides << "run.max_evals = " << *max_evals << "\n";
  if (!out.empty()) overrides << "run.out = " << out << "\n";
  if (overrides.tellp() > 0) {
    std::string base;
    if (!config_path.empty()) {
      // Re-serialize the parsed config minus the keys being overridden;
      // switching the algorithm also drops the old algo.* settings, whose
      // keys may be invalid for the new one.
      std::istringstream lines(dfo::serialize_config(cfg));
      const bool algo_changed = !algo.empty();
      for (std::string line; std::getline(lines, line);) {
        if (algo_changed && line.rfind("algo.", 0) == 0) continue;
        if (!fn.empty() && line.rfind("fn.name ", 0) == 0) continue;
        if (dim && line.rfind("fn.dim ", 0) == 0) continue;
        if (seed && line.rfind("run.seeds ", 0) == 0) continue;
        if (max_evals && line.rfind("run.max_evals ", 0) == 0) continue;
        if (!out.empty() && line.rfind("run.out ", 0) == 0) continue;
        base += line + "\n";
      }
    }
    cfg = dfo::parse_config(base + overrides.str());
  }

  dfo::validate_experiment(cfg);
  // Echo the normalized configuration for provenance; the CSV format itself
  // is fixed and carries only the run header line.
  std::istringstream echo(dfo::serialize_config(cfg));
  for (std::string line; std::getline(echo, line);)
    std::cout << "# " << line << "\n";

  const std::vector<dfo::RunTrace> traces = dfo::run_experiment(cfg);
  bool degenerate = false;
  for (const dfo::RunTrace& trace : traces) {
    std::cout << "seed=" << trace.seed << " evals=" << trace.total_evals
              << " best=";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g",
                  trace.best.loss ? *trace.best.loss : 0.0);
    std::cout << buf << " stop=" << dfo::to_string(trace.stop_reason);
    if (!cfg.output_path.empty())
      std::cout << " file="
                << dfo::trace_file_path(cfg.output_path, trace.seed);
    std::cout << "\n";
    if (trace.stop_reason == dfo::StopReason::CovarianceDegenerate)
      degenerate = true;
  }
  return degenerate ? kExitRuntimeError : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Derivative-free optimization benchmark runner"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment");
  std::string config_path;
  std::string algo;
  std::string fn;
  std::optional<std::size_t> dim;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_evals;
  std::string out;
  run->add_option("--config", config_path, "Experiment config file");
  run->add_option("--algo", algo, "Algorithm id (overrides config)");
  run->add_option("--fn", fn, "Benchmark function (overrides config)");
  run->add_option("--dim", dim, "Dimension (overrides config)");
  run->add_option("--seed", seed, "Single seed (overrides config)");
  run->add_option("--max-evals", max_evals, "Evaluation budget (overrides config)");
  run->add_option("--out", out, "Trace output path (overrides config)");

  auto* list_algos = app.add_subcommand("list-algos", "List algorithm ids");
  auto* list_fns = app.add_subcommand("list-fns", "List benchmark functions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (list_algos->parsed()) {
      for (const std::string& id : dfo::algorithm_ids()) std::cout << id << "\n";
      return kExitOk;
    }
    if (list_fns->parsed()) {
      for (const auto& f : dfo::bench::all_benchmarks()) {
        std::cout << f.name << " ("
                  << (f.space_kind == dfo::SearchSpace::Kind::BinaryHypercube
                          ? "binary"
                          : "continuous")
                  << ")\n";
      }
      return kExitOk;
    }
    return run_command(config_path, algo, fn, dim, seed, max_evals, out);
  } catch (const dfo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const dfo::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}

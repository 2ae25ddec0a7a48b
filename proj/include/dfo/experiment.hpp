#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dfo/cmaes.hpp"
#include "dfo/de.hpp"
#include "dfo/es.hpp"
#include "dfo/ga.hpp"
#include "dfo/local_search.hpp"
#include "dfo/pso.hpp"
#include "dfo/sce.hpp"
#include "dfo/stop.hpp"
#include "dfo/trace.hpp"

namespace dfo {

/// One benchmark experiment: an algorithm, a function, and the seeds to run.
/// Only the config record matching `algorithm_id` is consulted.
struct ExperimentConfig {
  std::string algorithm_id;  // normalized id, e.g. "cma-es", "pso-inertia"

  ga::GaConfig ga;
  sce::SceConfig sce;
  de::DeConfig de;
  pso::PsoConfig pso;
  es::EsConfig es;
  cmaes::CmaConfig cmaes;
  local_search::NeighborhoodSpec neighborhood =
      local_search::NeighborhoodSpec::coordinate_step(1.0);
  local_search::AnnealSchedule anneal;

  std::string function_name;
  std::size_t dimension = 0;
  std::optional<double> box_lower;  // override the function's default box
  std::optional<double> box_upper;

  std::vector<std::uint64_t> seeds = {1};
  StopCriteria criteria;
  std::string output_path;  // empty: no trace files written

  bool parallel_seeds = true;
  bool parallel_eval = false;
};

/// Full list of algorithm ids accepted by run_experiment and the CLI.
const std::vector<std::string>& algorithm_ids();

/// Parses flat `key = value` text with `#` comments and key namespaces
/// algo. / fn. / run. Unknown keys and malformed values are rejected with
/// their 1-based line number. Defaults fill every omitted optional key.
ExperimentConfig parse_config(const std::string& text);

/// Canonical text form; parse(serialize(parse(text))) == parse(text) and
/// serialize is idempotent after the first normalization.
std::string serialize_config(const ExperimentConfig& cfg);

/// The search space the experiment runs in (function default box, config
/// overrides applied).
SearchSpace experiment_space(const ExperimentConfig& cfg);

/// Validates the algorithm/function/space pairing without running anything.
/// Throws ConfigError; run_experiment calls this before the first run.
void validate_experiment(const ExperimentConfig& cfg);

/// Runs one seed to completion.
RunTrace run_single(const ExperimentConfig& cfg, std::uint64_t seed);

/// One trace per seed, in seed order; seeds fan out across OpenMP threads
/// when parallel_seeds is set (traces are identical either way). Trace files
/// are written when output_path is nonempty.
std::vector<RunTrace> run_experiment(const ExperimentConfig& cfg);

/// Output file for one seed: `<path>_s<seed>.csv` (a trailing .csv in the
/// configured path is stripped first).
std::string trace_file_path(const std::string& output_path, std::uint64_t seed);

/// CSV persistence: `# algo=<id> fn=<name> dim=<d> seed=<seed>` header, an
/// `eval,best_loss` column line, one row per improvement event, and a final
/// row at termination when the run outlived its last improvement. Losses are
/// printed with 17 significant digits so parsing them back is exact. On I/O
/// failure the partial file is removed and IoError is thrown.
void write_trace(const RunTrace& trace, const std::string& function_name,
                 std::size_t dim, const std::string& path);

}  // namespace dfo

#include "dfo/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dfo/benchmarks.hpp"
#include "dfo/errors.hpp"

namespace dfo {
namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end != value.c_str() + value.size() || value.empty())
    throw ConfigError("expected a number, got '" + value + "'", line);
  return v;
}

std::size_t parse_size(const std::string& value, std::size_t line) {
  const double v = parse_double(value, line);
  if (v < 0.0 || v != static_cast<double>(static_cast<std::size_t>(v)))
    throw ConfigError("expected a nonnegative integer, got '" + value + "'", line);
  return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& value, std::size_t line) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError("expected true or false, got '" + value + "'", line);
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& value, std::size_t line, Parse parse) {
  std::vector<T> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse(trim(item), line));
  if (out.empty()) throw ConfigError("expected a comma-separated list", line);
  return out;
}

std::string normalize_algorithm_id(const std::string& id, std::size_t line) {
  if (id == "de") return "de-rand1";
  if (id == "pso") return "pso-standard";
  if (id == "sa") return "simulated-annealing";
  const auto& ids = algorithm_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end())
    throw ConfigError("unknown algorithm id '" + id + "'", line);
  return id;
}

/// algo.* keys accepted for each algorithm id.
const std::set<std::string>& algo_keys(const std::string& id) {
  static const std::map<std::string, std::set<std::string>> table = {
      {"ga",
       {"pop_size", "mutation_prob", "crossover_points", "uniform_crossover",
        "init_bernoulli_p", "init_mean", "init_stddev", "mutation_stddev",
        "elitism"}},
      {"sce",
       {"complexes", "complex_size", "parents", "offspring_rounds",
        "evolution_rounds"}},
      {"de", {"pop_size", "diff_weight", "greediness", "crossover_prob"}},
      {"pso",
       {"swarm_size", "c1", "c2", "v_min", "v_max", "w_start", "w_end",
        "t_max", "k", "topology", "ring_radius"}},
      {"es",
       {"mu", "rho", "lambda", "mode", "recombination", "weights",
        "mate_selection", "mutation", "isotropic_variance", "stddevs"}},
      {"cma-es",
       {"lambda", "mu", "weights", "sigma0", "c_m", "c_sigma", "d_sigma",
        "c_c", "c_1", "c_mu"}},
      {"hill-climb", {"neighborhood", "step"}},
      {"simulated-annealing",
       {"proposal", "stddev", "t_initial", "alpha", "iters"}},
  };
  if (id.rfind("de-", 0) == 0) return table.at("de");
  if (id.rfind("pso-", 0) == 0) return table.at("pso");
  return table.at(id);
}

void apply_algo_key(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value, std::size_t line) {
  const std::string& id = cfg.algorithm_id;
  if (id == "ga") {
    auto& ga = cfg.ga;
    if (key == "pop_size") ga.pop_size = parse_size(value, line);
    else if (key == "mutation_prob") ga.mutation_prob = parse_double(value, line);
    else if (key == "crossover_points") ga.crossover_points = parse_size(value, line);
    else if (key == "uniform_crossover") ga.uniform_crossover = parse_bool(value, line);
    else if (key == "init_bernoulli_p") ga.init_bernoulli_p = parse_double(value, line);
    else if (key == "init_mean") ga.init_mean = parse_double(value, line);
    else if (key == "init_stddev") ga.init_stddev = parse_double(value, line);
    else if (key == "mutation_stddev") ga.mutation_stddev = parse_double(value, line);
    else if (key == "elitism") ga.elitism = parse_size(value, line);
  } else if (id == "sce") {
    auto& sce = cfg.sce;
    if (key == "complexes") sce.num_complexes = parse_size(value, line);
    else if (key == "complex_size") sce.complex_size = parse_size(value, line);
    else if (key == "parents") sce.cce_parents = parse_size(value, line);
    else if (key == "offspring_rounds") sce.cce_offspring_rounds = parse_size(value, line);
    else if (key == "evolution_rounds") sce.cce_evolution_rounds = parse_size(value, line);
  } else if (id.rfind("de-", 0) == 0) {
    auto& de = cfg.de;
    if (key == "pop_size") de.pop_size = parse_size(value, line);
    else if (key == "diff_weight") de.diff_weight = parse_double(value, line);
    else if (key == "greediness") de.greediness = parse_double(value, line);
    else if (key == "crossover_prob") de.crossover_prob = parse_double(value, line);
  } else if (id.rfind("pso-", 0) == 0) {
    auto& pso = cfg.pso;
    if (key == "swarm_size") pso.swarm_size = parse_size(value, line);
    else if (key == "c1") pso.c1 = parse_double(value, line);
    else if (key == "c2") pso.c2 = parse_double(value, line);
    else if (key == "v_min") pso.v_min = parse_double(value, line);
    else if (key == "v_max") pso.v_max = parse_double(value, line);
    else if (key == "w_start") pso.w_start = parse_double(value, line);
    else if (key == "w_end") pso.w_end = parse_double(value, line);
    else if (key == "t_max") pso.t_max = parse_size(value, line);
    else if (key == "k") pso.k_constriction = parse_double(value, line);
    else if (key == "ring_radius") pso.ring_radius = parse_size(value, line);
    else if (key == "topology") {
      if (value == "global") pso.topology = pso::Topology::Global;
      else if (value == "ring") pso.topology = pso::Topology::Ring;
      else throw ConfigError("topology must be global or ring", line);
    }
  } else if (id == "es") {
    auto& es = cfg.es;
    if (key == "mu") es.mu = parse_size(value, line);
    else if (key == "rho") es.rho = parse_size(value, line);
    else if (key == "lambda") es.lambda = parse_size(value, line);
    else if (key == "weights")
      es.weights = parse_list<double>(value, line, parse_double);
    else if (key == "isotropic_variance")
      es.mutation = es::MutationShape::isotropic(parse_double(value, line));
    else if (key == "stddevs")
      es.mutation = es::MutationShape::diagonal(
          parse_list<double>(value, line, parse_double));
    else if (key == "mode") {
      if (value == "plus") es.mode = es::Mode::Plus;
      else if (value == "comma") es.mode = es::Mode::Comma;
      else throw ConfigError("mode must be plus or comma", line);
    } else if (key == "recombination") {
      if (value == "discrete") es.recombination = es::Recombination::Discrete;
      else if (value == "intermediate") es.recombination = es::Recombination::Intermediate;
      else if (value == "weighted") es.recombination = es::Recombination::Weighted;
      else throw ConfigError("recombination must be discrete, intermediate or weighted", line);
    } else if (key == "mate_selection") {
      if (value == "uniform") es.mate_selection = es::MateSelection::FitnessIndependent;
      else if (value == "fitness") es.mate_selection = es::MateSelection::FitnessBased;
      else throw ConfigError("mate_selection must be uniform or fitness", line);
    } else if (key == "mutation") {
      if (value != "isotropic" && value != "diagonal")
        throw ConfigError("mutation must be isotropic or diagonal", line);
      // shape parameters arrive via isotropic_variance / stddevs
    }
  } else if (id == "cma-es") {
    auto& cma = cfg.cmaes;
    if (key == "lambda") cma.lambda = parse_size(value, line);
    else if (key == "mu") cma.mu = parse_size(value, line);
    else if (key == "weights")
      cma.weights = parse_list<double>(value, line, parse_double);
    else if (key == "sigma0") cma.sigma0 = parse_double(value, line);
    else if (key == "c_m") cma.c_m = parse_double(value, line);
    else if (key == "c_sigma") cma.c_sigma = parse_double(value, line);
    else if (key == "d_sigma") cma.d_sigma = parse_double(value, line);
    else if (key == "c_c") cma.c_c = parse_double(value, line);
    else if (key == "c_1") cma.c_1 = parse_double(value, line);
    else if (key == "c_mu") cma.c_mu = parse_double(value, line);
  } else if (id == "hill-climb") {
    if (key == "step") cfg.neighborhood.step = parse_double(value, line);
    else if (key == "neighborhood") {
      if (value == "coordinate-step")
        cfg.neighborhood.kind = local_search::NeighborhoodSpec::Kind::CoordinateStep;
      else if (value == "bit-flip")
        cfg.neighborhood.kind = local_search::NeighborhoodSpec::Kind::BitFlip;
      else throw ConfigError("neighborhood must be coordinate-step or bit-flip", line);
    }
  } else if (id == "simulated-annealing") {
    if (key == "stddev") cfg.neighborhood.stddev = parse_double(value, line);
    else if (key == "t_initial") cfg.anneal.t_initial = parse_double(value, line);
    else if (key == "alpha") cfg.anneal.alpha = parse_double(value, line);
    else if (key == "iters") cfg.anneal.max_iters = parse_size(value, line);
    else if (key == "proposal") {
      if (value == "gaussian")
        cfg.neighborhood.kind = local_search::NeighborhoodSpec::Kind::GaussianPerturb;
      else if (value == "bit-flip")
        cfg.neighborhood.kind = local_search::NeighborhoodSpec::Kind::BitFlip;
      else throw ConfigError("proposal must be gaussian or bit-flip", line);
    }
  }
}

/// Keeps scheme/variant-style enums in sync with the algorithm id.
void apply_id_presets(ExperimentConfig& cfg) {
  const std::string& id = cfg.algorithm_id;
  if (id == "de-rand1") cfg.de.scheme = de::Scheme::Rand1;
  if (id == "de-best1") cfg.de.scheme = de::Scheme::Best1Greedy;
  if (id == "pso-binary") cfg.pso.variant = pso::Variant::Binary;
  if (id == "pso-standard") cfg.pso.variant = pso::Variant::Standard;
  if (id == "pso-inertia") cfg.pso.variant = pso::Variant::Inertia;
  if (id == "pso-constriction") cfg.pso.variant = pso::Variant::Constriction;
  if (id == "simulated-annealing" &&
      cfg.neighborhood.kind == local_search::NeighborhoodSpec::Kind::CoordinateStep)
    cfg.neighborhood = local_search::NeighborhoodSpec::gaussian_perturb();
}

}  // namespace

const std::vector<std::string>& algorithm_ids() {
  static const std::vector<std::string> ids = {
      "ga",           "sce",         "de-rand1",         "de-best1",
      "pso-binary",   "pso-standard", "pso-inertia",     "pso-constriction",
      "es",           "cma-es",      "hill-climb",       "simulated-annealing",
  };
  return ids;
}

ExperimentConfig parse_config(const std::string& text) {
  struct Entry {
    std::size_t line;
    std::string key;
    std::string value;
  };
  std::vector<Entry> entries;
  std::stringstream ss(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(ss, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value'", line_no);
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("expected 'key = value'", line_no);
    entries.push_back({line_no, key, value});
  }

  ExperimentConfig cfg;
  // The algorithm id decides which algo.* keys are legal, so find it first.
  bool have_id = false;
  for (const Entry& e : entries) {
    if (e.key == "algo.id") {
      if (have_id) throw ConfigError("duplicate algo.id", e.line);
      cfg.algorithm_id = normalize_algorithm_id(e.value, e.line);
      have_id = true;
    }
  }
  if (!have_id) throw ConfigError("missing required key algo.id");
  apply_id_presets(cfg);

  bool have_fn = false;
  bool have_dim = false;
  for (const Entry& e : entries) {
    const std::string& key = e.key;
    const std::string& value = e.value;
    if (key == "algo.id") continue;
    if (key.rfind("algo.", 0) == 0) {
      const std::string sub = key.substr(5);
      if (!algo_keys(cfg.algorithm_id).count(sub))
        throw ConfigError("unknown key '" + key + "' for algorithm '" +
                              cfg.algorithm_id + "'",
                          e.line);
      try {
        apply_algo_key(cfg, sub, value, e.line);
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& inner) {
        throw ConfigError(inner.what(), e.line);
      }
    } else if (key == "fn.name") {
      cfg.function_name = value;
      have_fn = true;
    } else if (key == "fn.dim") {
      cfg.dimension = parse_size(value, e.line);
      if (cfg.dimension < 1) throw ConfigError("fn.dim >= 1 required", e.line);
      have_dim = true;
    } else if (key == "fn.lower") {
      cfg.box_lower = parse_double(value, e.line);
    } else if (key == "fn.upper") {
      cfg.box_upper = parse_double(value, e.line);
    } else if (key == "run.seeds") {
      cfg.seeds = parse_list<std::uint64_t>(
          value, e.line, [](const std::string& v, std::size_t ln) {
            return static_cast<std::uint64_t>(parse_size(v, ln));
          });
    } else if (key == "run.max_evals") {
      cfg.criteria.max_evals = parse_size(value, e.line);
    } else if (key == "run.target_loss") {
      cfg.criteria.target_loss = parse_double(value, e.line);
    } else if (key == "run.max_iters") {
      cfg.criteria.max_iters = parse_size(value, e.line);
    } else if (key == "run.stall_iters") {
      cfg.criteria.stall_iters = parse_size(value, e.line);
    } else if (key == "run.stall_tol") {
      cfg.criteria.stall_tol = parse_double(value, e.line);
    } else if (key == "run.out") {
      cfg.output_path = value;
    } else if (key == "run.parallel_seeds") {
      cfg.parallel_seeds = parse_bool(value, e.line);
    } else if (key == "run.parallel_eval") {
      cfg.parallel_eval = parse_bool(value, e.line);
    } else {
      throw ConfigError("unknown key '" + key + "'", e.line);
    }
  }
  if (!have_fn) throw ConfigError("missing required key fn.name");
  if (!have_dim) throw ConfigError("missing required key fn.dim");
  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  const std::string& id = cfg.algorithm_id;
  out << "algo.id = " << id << "\n";
  const auto emit = [&out](const std::string& key, const std::string& value) {
    out << key << " = " << value << "\n";
  };
  const auto emit_list = [&emit](const std::string& key,
                                 const std::vector<double>& values) {
    std::string joined;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) joined += ",";
      joined += format_double(values[i]);
    }
    emit(key, joined);
  };

  if (id == "ga") {
    emit("algo.pop_size", std::to_string(cfg.ga.pop_size));
    if (cfg.ga.mutation_prob)
      emit("algo.mutation_prob", format_double(*cfg.ga.mutation_prob));
    emit("algo.crossover_points", std::to_string(cfg.ga.crossover_points));
    emit("algo.uniform_crossover", cfg.ga.uniform_crossover ? "true" : "false");
    emit("algo.init_bernoulli_p", format_double(cfg.ga.init_bernoulli_p));
    emit("algo.init_mean", format_double(cfg.ga.init_mean));
    emit("algo.init_stddev", format_double(cfg.ga.init_stddev));
    if (cfg.ga.mutation_stddev)
      emit("algo.mutation_stddev", format_double(*cfg.ga.mutation_stddev));
    emit("algo.elitism", std::to_string(cfg.ga.elitism));
  } else if (id == "sce") {
    emit("algo.complexes", std::to_string(cfg.sce.num_complexes));
    if (cfg.sce.complex_size)
      emit("algo.complex_size", std::to_string(*cfg.sce.complex_size));
    if (cfg.sce.cce_parents)
      emit("algo.parents", std::to_string(*cfg.sce.cce_parents));
    emit("algo.offspring_rounds", std::to_string(cfg.sce.cce_offspring_rounds));
    if (cfg.sce.cce_evolution_rounds)
      emit("algo.evolution_rounds", std::to_string(*cfg.sce.cce_evolution_rounds));
  } else if (id.rfind("de-", 0) == 0) {
    emit("algo.pop_size", std::to_string(cfg.de.pop_size));
    emit("algo.diff_weight", format_double(cfg.de.diff_weight));
    emit("algo.greediness", format_double(cfg.de.greediness));
    emit("algo.crossover_prob", format_double(cfg.de.crossover_prob));
  } else if (id.rfind("pso-", 0) == 0) {
    emit("algo.swarm_size", std::to_string(cfg.pso.swarm_size));
    emit("algo.c1", format_double(cfg.pso.c1));
    emit("algo.c2", format_double(cfg.pso.c2));
    if (cfg.pso.v_min) emit("algo.v_min", format_double(*cfg.pso.v_min));
    if (cfg.pso.v_max) emit("algo.v_max", format_double(*cfg.pso.v_max));
    if (id == "pso-inertia") {
      emit("algo.w_start", format_double(cfg.pso.w_start));
      emit("algo.w_end", format_double(cfg.pso.w_end));
      emit("algo.t_max", std::to_string(cfg.pso.t_max));
    }
    if (id == "pso-constriction")
      emit("algo.k", format_double(cfg.pso.k_constriction));
    emit("algo.topology",
         cfg.pso.topology == pso::Topology::Global ? "global" : "ring");
    if (cfg.pso.topology == pso::Topology::Ring)
      emit("algo.ring_radius", std::to_string(cfg.pso.ring_radius));
  } else if (id == "es") {
    emit("algo.mu", std::to_string(cfg.es.mu));
    emit("algo.rho", std::to_string(cfg.es.rho));
    emit("algo.lambda", std::to_string(cfg.es.lambda));
    emit("algo.mode", cfg.es.mode == es::Mode::Plus ? "plus" : "comma");
    switch (cfg.es.recombination) {
      case es::Recombination::Discrete: emit("algo.recombination", "discrete"); break;
      case es::Recombination::Intermediate: emit("algo.recombination", "intermediate"); break;
      case es::Recombination::Weighted: emit("algo.recombination", "weighted"); break;
    }
    if (!cfg.es.weights.empty()) emit_list("algo.weights", cfg.es.weights);
    emit("algo.mate_selection",
         cfg.es.mate_selection == es::MateSelection::FitnessIndependent
             ? "uniform"
             : "fitness");
    if (cfg.es.mutation) {
      if (cfg.es.mutation->kind == es::MutationShape::Kind::Isotropic)
        emit("algo.isotropic_variance",
             format_double(cfg.es.mutation->isotropic_variance));
      else if (cfg.es.mutation->kind == es::MutationShape::Kind::Diagonal)
        emit_list("algo.stddevs", cfg.es.mutation->stddevs);
    }
  } else if (id == "cma-es") {
    if (cfg.cmaes.lambda) emit("algo.lambda", std::to_string(*cfg.cmaes.lambda));
    if (cfg.cmaes.mu) emit("algo.mu", std::to_string(*cfg.cmaes.mu));
    if (cfg.cmaes.weights) emit_list("algo.weights", *cfg.cmaes.weights);
    if (cfg.cmaes.sigma0) emit("algo.sigma0", format_double(*cfg.cmaes.sigma0));
    emit("algo.c_m", format_double(cfg.cmaes.c_m));
    if (cfg.cmaes.c_sigma) emit("algo.c_sigma", format_double(*cfg.cmaes.c_sigma));
    if (cfg.cmaes.d_sigma) emit("algo.d_sigma", format_double(*cfg.cmaes.d_sigma));
    if (cfg.cmaes.c_c) emit("algo.c_c", format_double(*cfg.cmaes.c_c));
    if (cfg.cmaes.c_1) emit("algo.c_1", format_double(*cfg.cmaes.c_1));
    if (cfg.cmaes.c_mu) emit("algo.c_mu", format_double(*cfg.cmaes.c_mu));
  } else if (id == "hill-climb") {
    emit("algo.neighborhood",
         cfg.neighborhood.kind == local_search::NeighborhoodSpec::Kind::BitFlip
             ? "bit-flip"
             : "coordinate-step");
    if (cfg.neighborhood.kind ==
        local_search::NeighborhoodSpec::Kind::CoordinateStep)
      emit("algo.step", format_double(cfg.neighborhood.step));
  } else if (id == "simulated-annealing") {
    emit("algo.proposal",
         cfg.neighborhood.kind == local_search::NeighborhoodSpec::Kind::BitFlip
             ? "bit-flip"
             : "gaussian");
    if (cfg.neighborhood.stddev)
      emit("algo.stddev", format_double(*cfg.neighborhood.stddev));
    emit("algo.t_initial", format_double(cfg.anneal.t_initial));
    emit("algo.alpha", format_double(cfg.anneal.alpha));
    emit("algo.iters", std::to_string(cfg.anneal.max_iters));
  }

  emit("fn.name", cfg.function_name);
  emit("fn.dim", std::to_string(cfg.dimension));
  if (cfg.box_lower) emit("fn.lower", format_double(*cfg.box_lower));
  if (cfg.box_upper) emit("fn.upper", format_double(*cfg.box_upper));
  {
    std::string joined;
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
      if (i) joined += ",";
      joined += std::to_string(cfg.seeds[i]);
    }
    emit("run.seeds", joined);
  }
  emit("run.max_evals", std::to_string(cfg.criteria.max_evals));
  if (cfg.criteria.target_loss)
    emit("run.target_loss", format_double(*cfg.criteria.target_loss));
  if (cfg.criteria.max_iters)
    emit("run.max_iters", std::to_string(*cfg.criteria.max_iters));
  if (cfg.criteria.stall_iters)
    emit("run.stall_iters", std::to_string(*cfg.criteria.stall_iters));
  emit("run.stall_tol", format_double(cfg.criteria.stall_tol));
  if (!cfg.output_path.empty()) emit("run.out", cfg.output_path);
  emit("run.parallel_seeds", cfg.parallel_seeds ? "true" : "false");
  emit("run.parallel_eval", cfg.parallel_eval ? "true" : "false");
  return out.str();
}

SearchSpace experiment_space(const ExperimentConfig& cfg) {
  const auto& fn = bench::find_benchmark(cfg.function_name);
  if (cfg.dimension < 1) throw ConfigError("fn.dim >= 1 required");
  if (fn.space_kind == SearchSpace::Kind::BinaryHypercube) {
    if (cfg.box_lower || cfg.box_upper)
      throw ConfigError("fn.lower/fn.upper do not apply to binary functions");
    return SearchSpace::binary(cfg.dimension);
  }
  if (cfg.dimension < fn.min_dim)
    throw ConfigError("function '" + fn.name + "' requires dim >= " +
                      std::to_string(fn.min_dim));
  const double lo = cfg.box_lower ? *cfg.box_lower : fn.default_lower;
  const double hi = cfg.box_upper ? *cfg.box_upper : fn.default_upper;
  if (!(lo < hi)) throw ConfigError("fn.lower < fn.upper required");
  return SearchSpace::continuous(cfg.dimension, lo, hi);
}

void validate_experiment(const ExperimentConfig& cfg) {
  const auto& ids = algorithm_ids();
  if (std::find(ids.begin(), ids.end(), cfg.algorithm_id) == ids.end())
    throw ConfigError("unknown algorithm id '" + cfg.algorithm_id + "'");
  if (cfg.seeds.empty()) throw ConfigError("at least one seed required");
  const SearchSpace space = experiment_space(cfg);

  ExperimentConfig resolved = cfg;
  apply_id_presets(resolved);
  const std::string& id = resolved.algorithm_id;
  try {
    resolved.criteria.validate();
    if (id == "ga") {
      resolved.ga.validate(space);
    } else if (id == "sce") {
      if (space.is_binary())
        throw UnsupportedSpaceError("sce needs a continuous function");
      resolved.sce.validate(space);
    } else if (id.rfind("de-", 0) == 0) {
      if (space.is_binary())
        throw UnsupportedSpaceError("de needs a continuous function");
      resolved.de.validate();
    } else if (id.rfind("pso-", 0) == 0) {
      resolved.pso.validate(space);
    } else if (id == "es") {
      if (space.is_binary())
        throw UnsupportedSpaceError("es needs a continuous function");
      resolved.es.validate(space);
    } else if (id == "cma-es") {
      cmaes::resolve(resolved.cmaes, space);
    } else if (id == "hill-climb") {
      using Kind = local_search::NeighborhoodSpec::Kind;
      if (resolved.neighborhood.kind == Kind::GaussianPerturb)
        throw std::invalid_argument("hill-climb needs an enumerable neighborhood");
      if ((resolved.neighborhood.kind == Kind::BitFlip) != space.is_binary())
        throw UnsupportedSpaceError("hill-climb neighborhood/space mismatch");
    } else if (id == "simulated-annealing") {
      using Kind = local_search::NeighborhoodSpec::Kind;
      resolved.anneal.validate();
      if ((resolved.neighborhood.kind == Kind::BitFlip) != space.is_binary())
        throw UnsupportedSpaceError("simulated-annealing proposal/space mismatch");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

RunTrace run_single(const ExperimentConfig& cfg, std::uint64_t seed) {
  ExperimentConfig resolved = cfg;
  apply_id_presets(resolved);
  const auto& fn = bench::find_benchmark(resolved.function_name);
  const SearchSpace space = experiment_space(resolved);
  RandomStream rng(seed);
  const EvalOptions eval{resolved.parallel_eval};
  const std::string& id = resolved.algorithm_id;

  if (id == "ga")
    return ga::run(fn.objective, space, resolved.ga, resolved.criteria, rng, eval);
  if (id == "sce")
    return sce::run(fn.objective, space, resolved.sce, resolved.criteria, rng, eval);
  if (id.rfind("de-", 0) == 0)
    return de::run(fn.objective, space, resolved.de, resolved.criteria, rng, eval);
  if (id.rfind("pso-", 0) == 0)
    return pso::run(fn.objective, space, resolved.pso, resolved.criteria, rng, eval);
  if (id == "es")
    return es::run(fn.objective, space, resolved.es, resolved.criteria, rng, eval);
  if (id == "cma-es")
    return cmaes::run(fn.objective, space, resolved.cmaes, resolved.criteria, rng, eval);
  if (id == "hill-climb")
    return local_search::hill_climb(fn.objective, space, resolved.neighborhood,
                                    std::nullopt, resolved.criteria, rng, eval);
  if (id == "simulated-annealing")
    return local_search::simulated_annealing(fn.objective, space,
                                             resolved.neighborhood,
                                             resolved.anneal, resolved.criteria,
                                             rng, std::nullopt, eval);
  throw ConfigError("unknown algorithm id '" + id + "'");
}

std::string trace_file_path(const std::string& output_path, std::uint64_t seed) {
  std::string stem = output_path;
  if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv")
    stem.erase(stem.size() - 4);
  return stem + "_s" + std::to_string(seed) + ".csv";
}

std::vector<RunTrace> run_experiment(const ExperimentConfig& cfg) {
  validate_experiment(cfg);
  const std::size_t n = cfg.seeds.size();
  std::vector<RunTrace> traces(n);
  std::vector<std::exception_ptr> errors(n);

  const auto run_one = [&](std::size_t i) {
    try {
      traces[i] = run_single(cfg, cfg.seeds[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

#ifdef _OPENMP
  if (cfg.parallel_seeds) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      run_one(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) run_one(i);
  }
#else
  for (std::size_t i = 0; i < n; ++i) run_one(i);
#endif

  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  if (!cfg.output_path.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      write_trace(traces[i], cfg.function_name, cfg.dimension,
                  trace_file_path(cfg.output_path, cfg.seeds[i]));
    }
  }
  return traces;
}

void write_trace(const RunTrace& trace, const std::string& function_name,
                 std::size_t dim, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "# algo=" << trace.algorithm_id << " fn=" << function_name
      << " dim=" << dim << " seed=" << trace.seed << "\n";
  out << "eval,best_loss\n";
  for (const TracePoint& pt : trace.history)
    out << pt.evals << "," << format_double(pt.best_loss) << "\n";
  if (!trace.history.empty() && trace.total_evals > trace.history.back().evals)
    out << trace.total_evals << ","
        << format_double(trace.history.back().best_loss) << "\n";
  out.flush();
  if (!out) {
    out.close();
    std::remove(path.c_str());
    throw IoError("write failed for '" + path + "'");
  }
}

}  // namespace dfo

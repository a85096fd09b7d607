#include "daspa/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <thread>

#include "daspa/baselines.hpp"
#include "daspa/distributed.hpp"
#include "daspa/engine.hpp"
#include "daspa/evaluation.hpp"
#include "daspa/io.hpp"

namespace daspa {
namespace {

const std::set<std::string> kKnownStrategies = {"proposed", "epa", "oracle", "no_interference"};

void require_keys(const nlohmann::json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key))
      throw ConfigError("unknown field " + where + "." + key);
  }
}

template <typename T>
T get_field(const nlohmann::json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError("missing field " + where + "." + key);
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("bad value for field " + where + "." + key);
  }
}

StepSizePolicy parse_policy(const std::string& text) {
  if (text == "theorem1") return StepSizePolicy::Theorem1;
  if (text == "lin2006") return StepSizePolicy::Lin2006;
  if (text == "manual") return StepSizePolicy::Manual;
  throw ConfigError("bad value for field algorithm.step_size_policy");
}

std::string policy_name(StepSizePolicy policy) {
  switch (policy) {
    case StepSizePolicy::Theorem1: return "theorem1";
    case StepSizePolicy::Lin2006: return "lin2006";
    case StepSizePolicy::Manual: return "manual";
  }
  return "theorem1";
}

StepSizes steps_for(const ExperimentConfig& config, StepSizePolicy policy,
                    const ProblemInstance& inst) {
  StepSizes steps;
  switch (policy) {
    case StepSizePolicy::Theorem1: steps = compute_theorem1_step_sizes(inst); break;
    case StepSizePolicy::Lin2006: steps = compute_lin2006_step_sizes(inst); break;
    case StepSizePolicy::Manual:
      steps.dual_steps = Eigen::VectorXd::Constant(inst.num_antennas(), *config.manual_alpha);
      break;
  }
  steps.anchor_step = config.anchor_step;
  return steps;
}

struct SeedArtifacts {
  std::vector<std::pair<std::string, std::string>> files;  // name -> content
  std::vector<ThroughputReport> reports;
  bool nonconverged = false;
};

ProblemInstance instance_for_seed(const ExperimentConfig& config, std::uint64_t seed,
                                  BuiltScenario& built) {
  ScenarioParams params;
  params.cells = config.cells;
  params.spacing_m = config.spacing_m;
  params.users_per_cell = config.users_per_cell;
  params.serving_count = config.serving_count;
  params.margin_db = config.margin_db;
  built = make_scenario(params, seed);
  const int N = built.access.num_users();
  const int K = built.access.num_antennas();
  return build_problem_instance(
      built.scenario, built.access, Eigen::VectorXd::Ones(N),
      Eigen::VectorXd::Constant(K, dbm_to_watt(config.power_dbm)),
      Eigen::VectorXd::Constant(N, config.proximal_weight));
}

RunConfig base_run_config(const ExperimentConfig& config, StepSizePolicy policy,
                          const ProblemInstance& inst) {
  RunConfig run_config;
  run_config.step_sizes = steps_for(config, policy, inst);
  run_config.max_iterations = config.max_iterations;
  run_config.stop_tol = config.stop_tol;
  return run_config;
}

SeedArtifacts run_one_seed(const ExperimentConfig& config, std::uint64_t seed) {
  SeedArtifacts artifacts;
  BuiltScenario built;
  const ProblemInstance inst = instance_for_seed(config, seed, built);
  const std::string tag = "_seed" + std::to_string(seed);

  for (const auto& strategy : config.strategies) {
    if (strategy == "proposed") {
      RunConfig run_config = base_run_config(config, config.policy, inst);
      // The gap column needs the optimum first; a tight pre-run supplies it.
      RunConfig tight = run_config;
      tight.stop_tol = std::min(config.stop_tol, 1e-9);
      tight.record_trace = false;
      const RunResult reference = run(inst, tight);
      run_config.reference_value = objective_value(inst, reference.state.anchors);

      RunResult result;
      if (config.runtime == RuntimeKind::Distributed) {
        const NodeTopology nodes = assign_hosts(inst, built.scenario.topology.bs_of_antenna);
        DistributedResult dist = run_distributed(inst, nodes, run_config);
        artifacts.files.emplace_back("messages" + tag + ".csv", ledger_to_csv(dist.ledger));
        nlohmann::json backhaul;
        backhaul["per_round"] = dist.backhaul_per_round;
        backhaul["bound_per_round"] = backhaul_bound_per_round(inst, nodes);
        artifacts.files.emplace_back("backhaul" + tag + ".json", backhaul.dump(2) + "\n");
        result = std::move(dist.run);
      } else {
        result = run(inst, run_config);
      }
      if (!result.converged) artifacts.nonconverged = true;
      artifacts.files.emplace_back("trace" + tag + ".csv", trace_to_csv(result.trace));
      artifacts.reports.push_back(make_throughput_report(
          built.scenario, built.access, inst, result.state.powers, strategy, seed));
    } else if (strategy == "epa") {
      artifacts.reports.push_back(make_throughput_report(
          built.scenario, built.access, inst, equal_power_allocation(inst), strategy, seed));
    } else if (strategy == "oracle") {
      const OracleResult oracle = oracle_solve(inst, OracleConfig{});
      if (!oracle.converged) artifacts.nonconverged = true;
      artifacts.reports.push_back(make_throughput_report(built.scenario, built.access, inst,
                                                         oracle.powers, strategy, seed));
    } else if (strategy == "no_interference") {
      const NoInterferenceBound bound =
          no_interference_bound(built.scenario, built.access, inst.weights, inst.budgets,
                                OracleConfig{});
      if (!bound.converged) artifacts.nonconverged = true;
      artifacts.reports.push_back(
          make_bound_report(built.scenario, bound.per_user_rate, inst.weights, seed));
    }
  }
  for (const auto& report : artifacts.reports)
    artifacts.files.emplace_back("throughput_" + report.strategy + tag + ".csv",
                                 throughput_to_csv(report));
  return artifacts;
}

/// Runs fn(seed_index) on a small worker pool; rethrows the first exception.
void parallel_over_seeds(size_t count, int threads, const std::function<void(size_t)>& fn) {
  unsigned worker_count = threads > 0 ? static_cast<unsigned>(threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
  worker_count = std::min<unsigned>(worker_count, static_cast<unsigned>(count));
  if (worker_count <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < worker_count; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& worker : pool) worker.join();
  if (failure) std::rethrow_exception(failure);
}

nlohmann::json make_manifest(const ExperimentConfig& config,
                             const std::vector<std::string>& files,
                             const std::filesystem::path& out_dir) {
  nlohmann::json manifest;
  manifest["schema_version"] = kConfigSchemaVersion;
  manifest["version"] = kVersion;
  manifest["config"] = config_to_json(config);
  manifest["config_hash"] = fnv1a64(manifest["config"].dump());
  manifest["seeds"] = config.seeds;
  nlohmann::json listed = nlohmann::json::array();
  for (const auto& name : files) {
    nlohmann::json entry;
    entry["path"] = name;
    entry["fnv1a64"] = fnv1a64(read_file((out_dir / name).string()));
    listed.push_back(entry);
  }
  manifest["files"] = listed;
  return manifest;
}

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

double half_width95(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  const double mean = mean_of(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  return 1.96 * sd / std::sqrt(static_cast<double>(values.size()));
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  require_keys(doc, "config",
               {"schema_version", "scenario", "algorithm", "strategies", "runtime", "output_dir"});
  const int version = get_field<int>(doc, "config", "schema_version");
  if (version != kConfigSchemaVersion)
    throw ConfigError("unsupported config.schema_version");

  ExperimentConfig config;
  if (!doc.contains("scenario") || !doc["scenario"].is_object())
    throw ConfigError("missing field config.scenario");
  const auto& scenario = doc["scenario"];
  require_keys(scenario, "scenario",
               {"cells", "spacing", "users_per_cell", "seeds", "P_dBm", "margin_dB",
                "serving_count"});
  config.cells = get_field<int>(scenario, "scenario", "cells");
  config.spacing_m = get_field<double>(scenario, "scenario", "spacing");
  config.users_per_cell = get_field<int>(scenario, "scenario", "users_per_cell");
  config.seeds = get_field<std::vector<std::uint64_t>>(scenario, "scenario", "seeds");
  config.power_dbm = get_field<double>(scenario, "scenario", "P_dBm");
  config.margin_db = get_field<double>(scenario, "scenario", "margin_dB");
  config.serving_count = get_field<int>(scenario, "scenario", "serving_count");

  if (!doc.contains("algorithm") || !doc["algorithm"].is_object())
    throw ConfigError("missing field config.algorithm");
  const auto& algorithm = doc["algorithm"];
  require_keys(algorithm, "algorithm",
               {"c_n", "beta", "step_size_policy", "manual_alpha", "stop_tol", "max_iters"});
  config.proximal_weight = get_field<double>(algorithm, "algorithm", "c_n");
  config.anchor_step = get_field<double>(algorithm, "algorithm", "beta");
  config.policy = parse_policy(get_field<std::string>(algorithm, "algorithm", "step_size_policy"));
  if (algorithm.contains("manual_alpha"))
    config.manual_alpha = get_field<double>(algorithm, "algorithm", "manual_alpha");
  config.stop_tol = get_field<double>(algorithm, "algorithm", "stop_tol");
  config.max_iterations = get_field<int>(algorithm, "algorithm", "max_iters");

  config.strategies = get_field<std::vector<std::string>>(doc, "config", "strategies");
  const std::string runtime = get_field<std::string>(doc, "config", "runtime");
  if (runtime == "monolithic") config.runtime = RuntimeKind::Monolithic;
  else if (runtime == "distributed") config.runtime = RuntimeKind::Distributed;
  else throw ConfigError("bad value for field config.runtime");
  config.output_dir = get_field<std::string>(doc, "config", "output_dir");

  // semantic checks
  if (config.cells < 1) throw ConfigError("scenario.cells must be >= 1");
  if (!(config.spacing_m > 0)) throw ConfigError("scenario.spacing must be positive");
  if (config.users_per_cell < 0) throw ConfigError("scenario.users_per_cell must be >= 0");
  if (config.seeds.empty()) throw ConfigError("scenario.seeds must be nonempty");
  if (!std::isfinite(config.power_dbm)) throw ConfigError("scenario.P_dBm must be finite");
  if (config.serving_count < 1) throw ConfigError("scenario.serving_count must be >= 1");
  if (!(config.proximal_weight > 0)) throw ConfigError("algorithm.c_n must be positive");
  if (!(config.anchor_step > 0 && config.anchor_step <= 1))
    throw ConfigError("algorithm.beta must be in (0, 1]");
  if (config.policy == StepSizePolicy::Manual &&
      (!config.manual_alpha || !(*config.manual_alpha > 0)))
    throw ConfigError("algorithm.manual_alpha must be positive for the manual policy");
  if (!(config.stop_tol >= 0)) throw ConfigError("algorithm.stop_tol must be >= 0");
  if (config.max_iterations < 1) throw ConfigError("algorithm.max_iters must be >= 1");
  if (config.strategies.empty()) throw ConfigError("config.strategies must be nonempty");
  for (const auto& strategy : config.strategies) {
    if (!kKnownStrategies.count(strategy))
      throw ConfigError("unknown strategy \"" + strategy + "\" in config.strategies");
  }
  return config;
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  nlohmann::json doc;
  doc["schema_version"] = kConfigSchemaVersion;
  doc["scenario"] = {{"cells", config.cells},
                     {"spacing", config.spacing_m},
                     {"users_per_cell", config.users_per_cell},
                     {"seeds", config.seeds},
                     {"P_dBm", config.power_dbm},
                     {"margin_dB", config.margin_db},
                     {"serving_count", config.serving_count}};
  doc["algorithm"] = {{"c_n", config.proximal_weight},
                      {"beta", config.anchor_step},
                      {"step_size_policy", policy_name(config.policy)},
                      {"stop_tol", config.stop_tol},
                      {"max_iters", config.max_iterations}};
  if (config.manual_alpha) doc["algorithm"]["manual_alpha"] = *config.manual_alpha;
  doc["strategies"] = config.strategies;
  doc["runtime"] = config.runtime == RuntimeKind::Monolithic ? "monolithic" : "distributed";
  doc["output_dir"] = config.output_dir;
  return doc;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(doc);
}

ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                 const ExperimentOptions& options) {
  ExperimentOutcome outcome;
  const std::filesystem::path out_dir =
      options.output_dir_override ? *options.output_dir_override : config.output_dir;
  std::filesystem::create_directories(out_dir);

  std::vector<SeedArtifacts> per_seed(config.seeds.size());
  parallel_over_seeds(config.seeds.size(), options.threads, [&](size_t i) {
    per_seed[i] = run_one_seed(config, config.seeds[i]);
    for (const auto& [name, content] : per_seed[i].files)
      atomic_write_file((out_dir / name).string(), content);
  });

  bool nonconverged = false;
  std::vector<std::string> files;
  for (const auto& artifacts : per_seed) {
    nonconverged = nonconverged || artifacts.nonconverged;
    for (const auto& [name, content] : artifacts.files) files.push_back(name);
  }

  // aggregate: per strategy, mean over seeds of the per-user mean rate
  nlohmann::json aggregate;
  for (const auto& strategy : config.strategies) {
    std::vector<double> true_means, conservative_means;
    double bandwidth = 1e6;
    for (const auto& artifacts : per_seed) {
      for (const auto& report : artifacts.reports) {
        if (report.strategy != strategy) continue;
        true_means.push_back(report.true_bps_hz.mean());
        conservative_means.push_back(report.conservative_bps_hz.mean());
        bandwidth = report.bandwidth_hz;
      }
    }
    nlohmann::json entry;
    entry["realizations"] = true_means.size();
    entry["mean_true_rate_bps_hz"] = mean_of(true_means);
    entry["half_width95_true_rate_bps_hz"] = half_width95(true_means);
    entry["mean_conservative_rate_bps_hz"] = mean_of(conservative_means);
    entry["half_width95_conservative_rate_bps_hz"] = half_width95(conservative_means);
    entry["mean_true_rate_bps"] = mean_of(true_means) * bandwidth;
    aggregate[strategy] = entry;
  }
  atomic_write_file((out_dir / "aggregate.json").string(), aggregate.dump(2) + "\n");
  files.push_back("aggregate.json");

  const nlohmann::json manifest = make_manifest(config, files, out_dir);
  atomic_write_file((out_dir / "manifest.json").string(), manifest.dump(2) + "\n");
  outcome.files = files;
  outcome.files.push_back("manifest.json");

  if (nonconverged && !options.allow_nonconverged) {
    outcome.exit_code = 2;
    outcome.message = "at least one strategy failed to converge";
  }
  return outcome;
}

ExperimentOutcome compare_step_sizes(const ExperimentConfig& config,
                                     const ExperimentOptions& options) {
  if (std::find(config.strategies.begin(), config.strategies.end(), "proposed") ==
      config.strategies.end())
    throw ConfigError("compare-steps requires \"proposed\" in config.strategies");
  ExperimentOutcome outcome;
  const std::filesystem::path out_dir =
      options.output_dir_override ? *options.output_dir_override : config.output_dir;
  std::filesystem::create_directories(out_dir);

  const std::vector<double> thresholds = {1e-2, 1e-3, 1e-4};
  struct Row {
    std::uint64_t seed;
    double threshold;
    int iters_theorem1;
    int iters_lin2006;
  };
  std::vector<std::vector<Row>> rows_per_seed(config.seeds.size());
  std::atomic<bool> nonconverged{false};

  parallel_over_seeds(config.seeds.size(), options.threads, [&](size_t i) {
    const std::uint64_t seed = config.seeds[i];
    BuiltScenario built;
    const ProblemInstance inst = instance_for_seed(config, seed, built);

    RunConfig tight = base_run_config(config, StepSizePolicy::Theorem1, inst);
    tight.stop_tol = std::min(config.stop_tol, 1e-10);
    tight.record_trace = false;
    const RunResult reference = run(inst, tight);
    const double optimum = objective_value(inst, reference.state.anchors);

    std::vector<IterationRecord> traces[2];
    const StepSizePolicy policies[2] = {StepSizePolicy::Theorem1, StepSizePolicy::Lin2006};
    for (int v = 0; v < 2; ++v) {
      RunConfig run_config = base_run_config(config, policies[v], inst);
      const RunResult result = run(inst, run_config);
      if (!result.converged) nonconverged = true;
      traces[v] = result.trace;
    }
    for (double threshold : thresholds) {
      rows_per_seed[i].push_back({seed, threshold,
                                  iterations_to_gap(traces[0], optimum, threshold),
                                  iterations_to_gap(traces[1], optimum, threshold)});
    }
  });

  std::vector<std::vector<std::string>> csv_rows;
  for (const auto& rows : rows_per_seed) {
    for (const auto& row : rows) {
      csv_rows.push_back({std::to_string(row.seed), format_double(row.threshold),
                          std::to_string(row.iters_theorem1), std::to_string(row.iters_lin2006)});
    }
  }
  atomic_write_file((out_dir / "compare_steps.csv").string(),
                    make_csv({"seed", "gap_threshold", "iters_theorem1", "iters_lin2006"},
                             csv_rows));
  outcome.files.push_back("compare_steps.csv");

  const nlohmann::json manifest = make_manifest(config, outcome.files, out_dir);
  atomic_write_file((out_dir / "manifest.json").string(), manifest.dump(2) + "\n");
  outcome.files.push_back("manifest.json");

  if (nonconverged && !options.allow_nonconverged) {
    outcome.exit_code = 2;
    outcome.message = "at least one policy failed to converge";
  }
  return outcome;
}

}  // namespace daspa

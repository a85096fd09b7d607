#ifndef DASPA_EXPERIMENT_HPP_
#define DASPA_EXPERIMENT_HPP_

#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "daspa/scenario.hpp"

namespace daspa {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kConfigSchemaVersion = 1;

/// Config problems carry the offending field in the message.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class StepSizePolicy { Theorem1, Lin2006, Manual };
enum class RuntimeKind { Monolithic, Distributed };

struct ExperimentConfig {
  // scenario block
  int cells = 7;
  double spacing_m = 1000.0;
  int users_per_cell = 10;
  std::vector<std::uint64_t> seeds;
  double power_dbm = 20.0;
  double margin_db = 5.0;
  int serving_count = 3;
  // algorithm block
  double proximal_weight = 3.0;  // c_n
  double anchor_step = 1.0;      // beta
  StepSizePolicy policy = StepSizePolicy::Theorem1;
  std::optional<double> manual_alpha;
  double stop_tol = 1e-8;
  int max_iterations = 20000;

  std::vector<std::string> strategies;
  RuntimeKind runtime = RuntimeKind::Monolithic;
  std::string output_dir = "out";
};

/// Parses and validates; throws ConfigError naming the field on any problem,
/// including fields that are not part of the schema.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);

struct ExperimentOptions {
  std::optional<std::string> output_dir_override;
  bool allow_nonconverged = false;
  int threads = 0;  // 0 = one per hardware thread, capped by seed count
};

struct ExperimentOutcome {
  int exit_code = 0;
  std::vector<std::string> files;
  std::string message;
};

/// Generates every seed's scenario, runs the requested strategies, and writes
/// throughput/trace/ledger CSVs plus aggregate and manifest JSONs. Seeds fan
/// out across worker threads; outputs are deterministic per seed.
ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                 const ExperimentOptions& options);

/// Runs the two step-size policies on identical instances and tabulates
/// iterations to reach dual-gap thresholds 1e-2, 1e-3, 1e-4.
ExperimentOutcome compare_step_sizes(const ExperimentConfig& config,
                                     const ExperimentOptions& options);

}  // namespace daspa

#endif  // DASPA_EXPERIMENT_HPP_

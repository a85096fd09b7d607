// Experiment runner for the distributed CoMP power-allocation library.
//
//   daspa run <config.json> [--out DIR] [--allow-nonconverged] [--threads N]
//   daspa compare-steps <config.json> [--out DIR] [--allow-nonconverged] [--threads N]
//   daspa validate <config.json>

#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "daspa/experiment.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  bool allow_nonconverged = false;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("config", args.config_path, "experiment config JSON")->required();
  cmd->add_option("--out", args.out_dir, "override the config's output directory");
  cmd->add_flag("--allow-nonconverged", args.allow_nonconverged,
                "exit 0 even when a strategy hits its iteration budget");
  cmd->add_option("--threads", args.threads, "worker threads for the seed fan-out (0 = auto)");
}

daspa::ExperimentOptions make_options(const CommonArgs& args) {
  daspa::ExperimentOptions options;
  if (!args.out_dir.empty()) options.output_dir_override = args.out_dir;
  options.allow_nonconverged = args.allow_nonconverged;
  options.threads = args.threads;
  return options;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coordinated multipoint power allocation experiments"};
  app.require_subcommand(1);

  CommonArgs run_args, compare_args;
  std::string validate_path;
  CLI::App* run_cmd = app.add_subcommand("run", "generate scenarios and run the strategies");
  add_common(run_cmd, run_args);
  CLI::App* compare_cmd =
      app.add_subcommand("compare-steps", "tabulate iterations-to-gap for both step policies");
  add_common(compare_cmd, compare_args);
  CLI::App* validate_cmd = app.add_subcommand("validate", "parse and check a config file");
  validate_cmd->add_option("config", validate_path, "experiment config JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      const auto config = daspa::load_config(run_args.config_path);
      const auto outcome = daspa::run_experiment(config, make_options(run_args));
      if (!outcome.message.empty()) std::fprintf(stderr, "%s\n", outcome.message.c_str());
      return outcome.exit_code;
    }
    if (compare_cmd->parsed()) {
      const auto config = daspa::load_config(compare_args.config_path);
      const auto outcome = daspa::compare_step_sizes(config, make_options(compare_args));
      if (!outcome.message.empty()) std::fprintf(stderr, "%s\n", outcome.message.c_str());
      return outcome.exit_code;
    }
    if (validate_cmd->parsed()) {
      daspa::load_config(validate_path);
      std::printf("config ok\n");
      return 0;
    }
  } catch (const daspa::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

#include <iostream>

#include "CLI11.hpp"
#include "ratelab/cli.hpp"

int main(int argc, char** argv) {
  using namespace ratelab::cli;

  CLI::App app{"ratelab: interest rate model simulation lab"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Simulate a config and write trace + metrics");
  run_cmd->add_option("--config", run.config_path, "Run config (JSON)")->required();
  run_cmd->add_option("--out", run.out, "Trace CSV path (overrides output.trace)");
  run_cmd->add_option("--backend", run.backend, "Numeric backend")
      ->check(CLI::IsMember({"fixed", "reference"}));
  run_cmd->add_option("--seed", run.seed, "Override the scenario seed");
  run_cmd->add_option("--band", run.band, "Settling band as a decimal string");

  std::string plot_trace;
  std::string plot_out;
  std::optional<std::string> plot_title;
  auto* plot_cmd = app.add_subcommand("plot", "Render a trace CSV to SVG");
  plot_cmd->add_option("--trace", plot_trace, "Trace CSV")->required();
  plot_cmd->add_option("--out", plot_out, "SVG output path")->required();
  plot_cmd->add_option("--title", plot_title, "Figure title");

  std::string targets_path;
  std::string space_path;
  std::optional<std::string> calibrate_out;
  auto* cal_cmd = app.add_subcommand("calibrate", "Grid-search PID parameters against targets");
  cal_cmd->add_option("--targets", targets_path, "Targets file (JSON)")->required();
  cal_cmd->add_option("--space", space_path, "Search space file (JSON)")->required();
  cal_cmd->add_option("--out", calibrate_out, "Write best config + miss table here");

  std::string replay_trace;
  std::optional<std::string> replay_backend;
  bool regen_golden = false;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run a recorded trace and compare");
  replay_cmd->add_option("--trace", replay_trace, "Trace CSV with its .run.json sidecar")
      ->required();
  replay_cmd->add_option("--backend", replay_backend, "Replay on another backend (1e-6 rel.)")
      ->check(CLI::IsMember({"fixed", "reference"}));
  replay_cmd->add_flag("--regen-golden", regen_golden, "Rewrite the trace instead of checking");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (*run_cmd) return cmd_run(run, std::cout, std::cerr);
  if (*plot_cmd) return cmd_plot(plot_trace, plot_out, plot_title, std::cout, std::cerr);
  if (*cal_cmd) return cmd_calibrate(targets_path, space_path, calibrate_out, std::cout, std::cerr);
  if (*replay_cmd) {
    return cmd_replay(replay_trace, replay_backend, regen_golden, std::cout, std::cerr);
  }
  return kUsage;
}

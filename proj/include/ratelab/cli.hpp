#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace ratelab::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2, kRuntime = 3 };

struct RunOptions {
  std::string config_path;
  std::optional<std::string> out;      // trace CSV; overrides the config
  std::optional<std::string> backend;  // "fixed" | "reference"
  std::optional<std::uint64_t> seed;
  std::optional<std::string> band;
};

// Writes the trace, its replay sidecar and a metrics summary.
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

int cmd_plot(const std::string& trace_csv, const std::string& out_svg,
             const std::optional<std::string>& title, std::ostream& out, std::ostream& err);

// Grid search; writes the best configuration and its miss table as JSON.
int cmd_calibrate(const std::string& targets_path, const std::string& space_path,
                  const std::optional<std::string>& out_path, std::ostream& out,
                  std::ostream& err);

// Verifies a recorded trace; with `regen_golden` rewrites it instead.
int cmd_replay(const std::string& trace_csv, const std::optional<std::string>& backend,
               bool regen_golden, std::ostream& out, std::ostream& err);

}  // namespace ratelab::cli

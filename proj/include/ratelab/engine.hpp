#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ratelab/config_io.hpp"
#include "ratelab/decimal.hpp"
#include "ratelab/numeric.hpp"
#include "ratelab/pid_irm.hpp"
#include "ratelab/scenario.hpp"
#include "ratelab/snapshot.hpp"
#include "ratelab/strategy.hpp"

namespace ratelab {

struct StrategyCell {
  Decimal rate;
  std::optional<ControllerBreakdown<Decimal>> breakdown;

  friend bool operator==(const StrategyCell&, const StrategyCell&) = default;
};

struct TraceRow {
  std::int64_t step = 0;
  Timestamp timestamp = 0;
  Decimal utilization;
  std::vector<StrategyCell> cells;  // one per strategy, in trace order

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct TraceStrategy {
  std::string name;
  std::string kind;      // empty when read back from a bare CSV
  Decimal target;        // utilization target, for metrics
  bool has_breakdown = false;

  friend bool operator==(const TraceStrategy&, const TraceStrategy&) = default;
};

/// Everything a run recorded, rounded to 18 digits whatever the backend.
struct SimTrace {
  std::vector<TraceStrategy> strategies;
  std::vector<TraceRow> rows;
  std::vector<Snapshot> final_states;  // per strategy; empty when read from CSV

  std::size_t strategy_index(std::string_view name) const;
};

/// Drives every strategy over the scenario. Open-loop runs feed all
/// strategies the same generated path. With a feedback model the single
/// strategy's rate drives utilization: the first `delay` steps come from the
/// generated path, every later step from feedback_next() on the rate
/// `delay` steps back.
SimTrace run(const std::vector<StrategySpec>& strategies, const ScenarioSpec& spec,
             Backend backend = Backend::fixed);

struct Metrics {
  std::string strategy;
  Decimal max_rate;
  std::int64_t inflection_step = 0;  // first step at peak utilization
  Decimal rate_at_inflection;
  std::optional<Decimal> overshoot;  // max rate from inflection on / rate at inflection
  std::int64_t settling_time = 0;    // leading steps before |u - target| < band for good
  bool settled = false;
  std::int64_t time_above_target = 0;
};

// One entry per strategy. Never-settled runs report settling_time = rows + 1.
std::vector<Metrics> compute_metrics(const SimTrace& trace, Decimal band);

Decimal rate_at(const SimTrace& trace, std::string_view strategy, std::int64_t step);
std::int64_t time_above(const SimTrace& trace, Decimal threshold);

// --- trace files ----------------------------------------------------------

std::string trace_to_csv(const SimTrace& trace);

// Parses the CSV form. Errors carry the 1-based line number.
SimTrace trace_from_csv(std::string_view text);

// Sidecar holding what replay needs: the run config and final states.
std::filesystem::path sidecar_path(const std::filesystem::path& trace_path);

// Writes trace CSV plus sidecar, each via temp file + rename.
void write_run_artifacts(const std::filesystem::path& trace_path, const SimTrace& trace,
                         const RunConfig& config);

struct ReplayReport {
  bool ok = true;
  std::int64_t step = 0;  // first divergent step; 0 for header or state mismatches
  std::string field;
  std::string expected;
  std::string actual;
  std::size_t rows_checked = 0;

  std::string describe() const;
};

/// Re-runs the recorded config and compares against the trace file. With
/// the recorded backend every cell must match bit for bit; across backends
/// each numeric cell must agree within 1e-6 relative.
ReplayReport replay(const std::filesystem::path& trace_path,
                    std::optional<Backend> backend_override = std::nullopt);

// Rewrites the trace and sidecar from the recorded config.
void regenerate(const std::filesystem::path& trace_path);

// Write-then-rename so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

// |a - b| / max(|b|, 1e-9) <= tolerance
bool within_relative(Decimal actual, Decimal reference, Decimal tolerance);

}  // namespace ratelab

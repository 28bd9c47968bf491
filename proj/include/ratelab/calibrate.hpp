#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ratelab/decimal.hpp"
#include "ratelab/pid_irm.hpp"
#include "ratelab/scenario.hpp"

namespace ratelab {

// Gains a target pins regardless of the grid point (e.g. k_i = 0 for a
// proportional-only target).
struct PidOverrides {
  std::optional<Decimal> k_p;
  std::optional<Decimal> k_i;
  std::optional<Decimal> k_d;
  std::optional<bool> derivative_enabled;
};

struct CalibrationTarget {
  std::string name;
  std::string scenario;
  std::int64_t step = 0;
  Decimal rate;
  Decimal tolerance;
  PidOverrides overrides;
};

struct CalibrationProblem {
  PidConfig base;  // supplies u_optimal and derivative settings
  std::map<std::string, ScenarioSpec> scenarios;
  std::vector<CalibrationTarget> targets;
};

// Axes are searched in the order m, n, k_p, k_i, k_d.
struct SearchSpace {
  std::vector<Decimal> m;
  std::vector<Decimal> n;
  std::vector<Decimal> k_p;
  std::vector<Decimal> k_i;
  std::vector<Decimal> k_d;

  std::size_t size() const { return m.size() * n.size() * k_p.size() * k_i.size() * k_d.size(); }
};

struct TargetOutcome {
  std::string name;
  Decimal rate;
  Decimal target;
  Decimal tolerance;
  Decimal miss;  // |rate - target| / target
  bool within = false;
};

struct CalibrationResult {
  PidConfig best;
  Decimal max_miss;
  bool feasible = false;
  std::vector<TargetOutcome> outcomes;
  std::size_t evaluated = 0;
};

CalibrationProblem calibration_problem_from_json(const nlohmann::json& j);

// Each axis is a list of decimal strings or {"from", "to", "step"}.
SearchSpace search_space_from_json(const nlohmann::json& j);

PidConfig apply_overrides(PidConfig config, const PidOverrides& overrides);

// The grid point's config: base with m, n and gains replaced.
PidConfig grid_config(const PidConfig& base, Decimal m, Decimal n, Decimal k_p, Decimal k_i,
                      Decimal k_d);

/// Scores one configuration against every target.
std::vector<TargetOutcome> evaluate_targets(const CalibrationProblem& problem,
                                            const PidConfig& config);

/// Exhaustive, deterministic grid search minimizing the largest relative
/// miss. Ties keep the earliest point in axis order. Throws
/// ValidationError on an empty axis or an empty target list.
CalibrationResult calibrate(const CalibrationProblem& problem, const SearchSpace& space);

nlohmann::json to_json(const CalibrationResult& result);

}  // namespace ratelab

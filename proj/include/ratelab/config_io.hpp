#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ratelab/decimal.hpp"
#include "ratelab/numeric.hpp"
#include "ratelab/scenario.hpp"
#include "ratelab/strategy.hpp"

namespace ratelab {

// Everything a simulation run needs. Decimal fields travel as JSON strings;
// JSON numbers are accepted only for integer fields.
struct RunConfig {
  std::vector<StrategySpec> strategies;
  ScenarioSpec scenario;
  Backend backend = Backend::fixed;
  Decimal band = Decimal::from_raw(20'000'000'000'000'000);  // 0.02
  std::optional<std::string> trace_path;
  std::optional<std::string> metrics_path;
};

std::string_view to_string(Backend backend);
Backend backend_from_string(std::string_view text);

// All parsers reject unknown keys and throw ValidationError with the
// offending JSON path in the message.
StrategySpec strategy_from_json(const nlohmann::json& j);
nlohmann::json to_json(const StrategySpec& spec);

PidConfig pid_config_from_json(const nlohmann::json& j, const std::string& where = "pid");
nlohmann::json to_json(const PidConfig& config);

ScenarioSpec scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioSpec& spec);

RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& config);

// Throws ConfigNotFound when the file is missing, ValidationError when it
// does not parse.
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json load_json_file(const std::filesystem::path& path);

// Shared field readers, exposed for the calibration file formats.
Decimal decimal_field(const nlohmann::json& j, const std::string& where);
std::int64_t int_field(const nlohmann::json& j, const std::string& where);
void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                         const std::string& where);

}  // namespace ratelab

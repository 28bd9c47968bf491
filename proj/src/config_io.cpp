#include "ratelab/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "ratelab/errors.hpp"

namespace ratelab {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

const json& require(const json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) invalid(where, "missing required key '" + key + "'");
  return *it;
}

template <class F>
void optional_field(const json& j, const std::string& key, F&& apply) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) apply(*it);
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) invalid(where, "expected an object");
}

bool bool_field(const json& j, const std::string& where) {
  if (!j.is_boolean()) invalid(where, "expected true or false");
  return j.get<bool>();
}

std::uint64_t seed_field(const json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return j.get<std::uint64_t>();
  invalid(where, "expected a non-negative integer seed");
}

std::string dec(Decimal d) { return d.to_string(); }

AaveConfig aave_from_json(const json& j, const std::string& where) {
  reject_unknown_keys(j, {"name", "kind", "base_rate", "slope1", "slope2", "u_kink"}, where);
  AaveConfig c;
  c.base_rate = decimal_field(require(j, "base_rate", where), where + ".base_rate");
  c.slope1 = decimal_field(require(j, "slope1", where), where + ".slope1");
  c.slope2 = decimal_field(require(j, "slope2", where), where + ".slope2");
  c.u_kink = decimal_field(require(j, "u_kink", where), where + ".u_kink");
  return c;
}

AjnaConfig ajna_from_json(const json& j, const std::string& where) {
  reject_unknown_keys(j,
                      {"name", "kind", "target_utilization", "epoch_seconds", "up_factor",
                       "down_factor", "initial_rate"},
                      where);
  AjnaConfig c;
  c.target_utilization =
      decimal_field(require(j, "target_utilization", where), where + ".target_utilization");
  c.initial_rate = decimal_field(require(j, "initial_rate", where), where + ".initial_rate");
  optional_field(j, "epoch_seconds",
                 [&](const json& v) { c.epoch_seconds = int_field(v, where + ".epoch_seconds"); });
  optional_field(j, "up_factor",
                 [&](const json& v) { c.up_factor = decimal_field(v, where + ".up_factor"); });
  optional_field(j, "down_factor",
                 [&](const json& v) { c.down_factor = decimal_field(v, where + ".down_factor"); });
  return c;
}

MorphoConfig morpho_from_json(const json& j, const std::string& where) {
  reject_unknown_keys(j,
                      {"name", "kind", "k_p", "u_target", "slope_below", "slope_above",
                       "initial_rate_at_target", "min_rate_at_target", "max_rate_at_target"},
                      where);
  MorphoConfig c;
  c.k_p = decimal_field(require(j, "k_p", where), where + ".k_p");
  c.u_target = decimal_field(require(j, "u_target", where), where + ".u_target");
  c.initial_rate_at_target = decimal_field(require(j, "initial_rate_at_target", where),
                                           where + ".initial_rate_at_target");
  optional_field(j, "slope_below",
                 [&](const json& v) { c.slope_below = decimal_field(v, where + ".slope_below"); });
  optional_field(j, "slope_above",
                 [&](const json& v) { c.slope_above = decimal_field(v, where + ".slope_above"); });
  optional_field(j, "min_rate_at_target", [&](const json& v) {
    c.min_rate_at_target = decimal_field(v, where + ".min_rate_at_target");
  });
  optional_field(j, "max_rate_at_target", [&](const json& v) {
    c.max_rate_at_target = decimal_field(v, where + ".max_rate_at_target");
  });
  return c;
}

Segment segment_from_json(const json& j, const std::string& where) {
  require_object(j, where);
  reject_unknown_keys(j, {"kind", "duration", "start", "end", "value", "size", "volatility"}, where);
  Segment s;
  const json& kind = require(j, "kind", where);
  if (!kind.is_string()) invalid(where + ".kind", "expected a string");
  s.kind = segment_kind_from_string(kind.get<std::string>());
  s.duration = int_field(require(j, "duration", where), where + ".duration");
  optional_field(j, "start", [&](const json& v) { s.start = decimal_field(v, where + ".start"); });
  optional_field(j, "value", [&](const json& v) { s.value = decimal_field(v, where + ".value"); });
  optional_field(j, "size", [&](const json& v) { s.size = decimal_field(v, where + ".size"); });
  optional_field(j, "volatility",
                 [&](const json& v) { s.volatility = decimal_field(v, where + ".volatility"); });
  if (s.kind == SegmentKind::linear_ramp) {
    s.end = decimal_field(require(j, "end", where), where + ".end");
  } else if (j.contains("end")) {
    invalid(where, "'end' only applies to linear-ramp segments");
  }
  return s;
}

json to_json(const Segment& s) {
  json j;
  j["kind"] = std::string(to_string(s.kind));
  j["duration"] = s.duration;
  if (s.start) j["start"] = dec(*s.start);
  if (s.kind == SegmentKind::linear_ramp) j["end"] = dec(s.end);
  if (s.value) j["value"] = dec(*s.value);
  if (s.kind == SegmentKind::step && !s.value) j["size"] = dec(s.size);
  if (s.kind == SegmentKind::random_walk) j["volatility"] = dec(s.volatility);
  return j;
}

FeedbackModel feedback_from_json(const json& j, const std::string& where) {
  require_object(j, where);
  reject_unknown_keys(j, {"elasticity", "reference_rate", "delay", "noise_volatility"}, where);
  FeedbackModel f;
  f.elasticity = decimal_field(require(j, "elasticity", where), where + ".elasticity");
  f.reference_rate = decimal_field(require(j, "reference_rate", where), where + ".reference_rate");
  optional_field(j, "delay", [&](const json& v) { f.delay = int_field(v, where + ".delay"); });
  optional_field(j, "noise_volatility", [&](const json& v) {
    f.noise_volatility = decimal_field(v, where + ".noise_volatility");
  });
  return f;
}

}  // namespace

Decimal decimal_field(const json& j, const std::string& where) {
  if (!j.is_string()) {
    invalid(where, "decimals must be written as strings (e.g. \"0.5\"), got " + j.dump());
  }
  try {
    return Decimal::parse(j.get<std::string>());
  } catch (const Error& e) {
    invalid(where, e.what());
  }
}

std::int64_t int_field(const json& j, const std::string& where) {
  if (!j.is_number_integer()) invalid(where, "expected an integer, got " + j.dump());
  return j.get<std::int64_t>();
}

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> allowed,
                         const std::string& where) {
  require_object(j, where);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) invalid(where, "unknown key '" + key + "'");
  }
}

std::string_view to_string(Backend backend) {
  return backend == Backend::fixed ? "fixed" : "reference";
}

Backend backend_from_string(std::string_view text) {
  if (text == "fixed") return Backend::fixed;
  if (text == "reference") return Backend::reference;
  throw ValidationError("unknown backend '" + std::string(text) + "' (expected fixed or reference)");
}

PidConfig pid_config_from_json(const json& j, const std::string& where) {
  reject_unknown_keys(j,
                      {"name", "kind", "k_p", "k_i", "k_d", "u_optimal", "m", "n", "r_o",
                       "derivative_period", "derivative_enabled"},
                      where);
  PidConfig c;
  optional_field(j, "k_p", [&](const json& v) { c.k_p = decimal_field(v, where + ".k_p"); });
  optional_field(j, "k_i", [&](const json& v) { c.k_i = decimal_field(v, where + ".k_i"); });
  optional_field(j, "k_d", [&](const json& v) { c.k_d = decimal_field(v, where + ".k_d"); });
  optional_field(j, "u_optimal",
                 [&](const json& v) { c.u_optimal = decimal_field(v, where + ".u_optimal"); });
  optional_field(j, "derivative_period", [&](const json& v) {
    c.derivative_period = int_field(v, where + ".derivative_period");
  });
  optional_field(j, "derivative_enabled", [&](const json& v) {
    c.derivative_enabled = bool_field(v, where + ".derivative_enabled");
  });
  c.m = decimal_field(require(j, "m", where), where + ".m");
  const bool has_n = j.contains("n");
  const bool has_r_o = j.contains("r_o");
  if (has_n == has_r_o) invalid(where, "give exactly one of 'n' or 'r_o'");
  if (has_n) {
    c.n = decimal_field(j["n"], where + ".n");
  } else {
    const Decimal r_o = decimal_field(j["r_o"], where + ".r_o");
    try {
      c.n = solve_shape(c.u_optimal, r_o, c.m);
    } catch (const InfeasibleAnchor& e) {
      invalid(where + ".r_o", e.what());
    }
  }
  validate(c);
  return c;
}

json to_json(const PidConfig& c) {
  return json{{"k_p", dec(c.k_p)},
              {"k_i", dec(c.k_i)},
              {"k_d", dec(c.k_d)},
              {"u_optimal", dec(c.u_optimal)},
              {"m", dec(c.m)},
              {"n", dec(c.n)},
              {"derivative_period", c.derivative_period},
              {"derivative_enabled", c.derivative_enabled}};
}

StrategySpec strategy_from_json(const json& j) {
  require_object(j, "strategy");
  const json& name = require(j, "name", "strategy");
  if (!name.is_string()) invalid("strategy.name", "expected a string");
  StrategySpec spec;
  spec.name = name.get<std::string>();
  const std::string where = "strategies." + spec.name;
  const json& kind = require(j, "kind", where);
  if (!kind.is_string()) invalid(where + ".kind", "expected a string");
  const auto k = kind.get<std::string>();
  if (k == "pid") {
    spec.config = pid_config_from_json(j, where);
  } else if (k == "aave") {
    spec.config = aave_from_json(j, where);
  } else if (k == "ajna") {
    spec.config = ajna_from_json(j, where);
  } else if (k == "morpho") {
    spec.config = morpho_from_json(j, where);
  } else {
    invalid(where + ".kind", "unknown strategy kind '" + k + "'");
  }
  validate(spec);
  return spec;
}

json to_json(const StrategySpec& spec) {
  json j = std::visit(
      [](const auto& c) -> json {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, PidConfig>) {
          return to_json(c);
        } else if constexpr (std::is_same_v<C, AaveConfig>) {
          return json{{"base_rate", dec(c.base_rate)},
                      {"slope1", dec(c.slope1)},
                      {"slope2", dec(c.slope2)},
                      {"u_kink", dec(c.u_kink)}};
        } else if constexpr (std::is_same_v<C, AjnaConfig>) {
          return json{{"target_utilization", dec(c.target_utilization)},
                      {"epoch_seconds", c.epoch_seconds},
                      {"up_factor", dec(c.up_factor)},
                      {"down_factor", dec(c.down_factor)},
                      {"initial_rate", dec(c.initial_rate)}};
        } else {
          return json{{"k_p", dec(c.k_p)},
                      {"u_target", dec(c.u_target)},
                      {"slope_below", dec(c.slope_below)},
                      {"slope_above", dec(c.slope_above)},
                      {"initial_rate_at_target", dec(c.initial_rate_at_target)},
                      {"min_rate_at_target", dec(c.min_rate_at_target)},
                      {"max_rate_at_target", dec(c.max_rate_at_target)}};
        }
      },
      spec.config);
  j["name"] = spec.name;
  j["kind"] = std::string(kind_name(spec.config));
  return j;
}

ScenarioSpec scenario_from_json(const json& j) {
  const std::string where = "scenario";
  reject_unknown_keys(j, {"dt", "seed", "segments", "feedback"}, where);
  ScenarioSpec s;
  optional_field(j, "dt", [&](const json& v) { s.dt = int_field(v, where + ".dt"); });
  optional_field(j, "seed", [&](const json& v) { s.seed = seed_field(v, where + ".seed"); });
  const json& segments = require(j, "segments", where);
  if (!segments.is_array()) invalid(where + ".segments", "expected an array");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    s.segments.push_back(
        segment_from_json(segments[i], where + ".segments[" + std::to_string(i) + "]"));
  }
  optional_field(j, "feedback",
                 [&](const json& v) { s.feedback = feedback_from_json(v, where + ".feedback"); });
  validate(s);
  return s;
}

json to_json(const ScenarioSpec& s) {
  json j;
  j["dt"] = s.dt;
  j["seed"] = s.seed;
  j["segments"] = json::array();
  for (const auto& seg : s.segments) j["segments"].push_back(to_json(seg));
  if (s.feedback) {
    j["feedback"] = json{{"elasticity", dec(s.feedback->elasticity)},
                         {"reference_rate", dec(s.feedback->reference_rate)},
                         {"delay", s.feedback->delay},
                         {"noise_volatility", dec(s.feedback->noise_volatility)}};
  }
  return j;
}

RunConfig run_config_from_json(const json& j) {
  reject_unknown_keys(j, {"backend", "band", "output", "scenario", "strategies"}, "config");
  RunConfig c;
  optional_field(j, "backend", [&](const json& v) {
    if (!v.is_string()) invalid("config.backend", "expected a string");
    c.backend = backend_from_string(v.get<std::string>());
  });
  optional_field(j, "band", [&](const json& v) { c.band = decimal_field(v, "config.band"); });
  optional_field(j, "output", [&](const json& v) {
    reject_unknown_keys(v, {"trace", "metrics"}, "config.output");
    optional_field(v, "trace", [&](const json& p) {
      if (!p.is_string()) invalid("config.output.trace", "expected a path string");
      c.trace_path = p.get<std::string>();
    });
    optional_field(v, "metrics", [&](const json& p) {
      if (!p.is_string()) invalid("config.output.metrics", "expected a path string");
      c.metrics_path = p.get<std::string>();
    });
  });
  c.scenario = scenario_from_json(require(j, "scenario", "config"));
  const json& strategies = require(j, "strategies", "config");
  if (!strategies.is_array() || strategies.empty()) {
    invalid("config.strategies", "expected a non-empty array");
  }
  std::set<std::string> names;
  for (const auto& s : strategies) {
    c.strategies.push_back(strategy_from_json(s));
    if (!names.insert(c.strategies.back().name).second) {
      invalid("config.strategies", "duplicate strategy name '" + c.strategies.back().name + "'");
    }
  }
  if (c.scenario.feedback && c.strategies.size() != 1) {
    invalid("config.strategies", "closed-loop (feedback) runs take exactly one strategy");
  }
  if (c.band <= Decimal::zero()) invalid("config.band", "must be positive");
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  j["backend"] = std::string(to_string(c.backend));
  j["band"] = dec(c.band);
  j["scenario"] = to_json(c.scenario);
  j["strategies"] = json::array();
  for (const auto& s : c.strategies) j["strategies"].push_back(to_json(s));
  if (c.trace_path || c.metrics_path) {
    j["output"] = json::object();
    if (c.trace_path) j["output"]["trace"] = *c.trace_path;
    if (c.metrics_path) j["output"]["metrics"] = *c.metrics_path;
  }
  return j;
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigNotFound("config not found: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return run_config_from_json(load_json_file(path));
}

}  // namespace ratelab

#include "ratelab/calibrate.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "ratelab/config_io.hpp"
#include "ratelab/errors.hpp"

namespace ratelab {

using nlohmann::json;

namespace {

std::vector<Decimal> axis_from_json(const json& j, const std::string& where) {
  std::vector<Decimal> out;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      out.push_back(decimal_field(j[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
  }
  reject_unknown_keys(j, {"from", "to", "step"}, where);
  const Decimal from = decimal_field(j.at("from"), where + ".from");
  const Decimal to = decimal_field(j.at("to"), where + ".to");
  const Decimal step = decimal_field(j.at("step"), where + ".step");
  if (step <= Decimal::zero()) throw ValidationError(where + ".step: must be positive");
  for (Decimal v = from; v <= to; v += step) out.push_back(v);
  return out;
}

PidOverrides overrides_from_json(const json& j, const std::string& where) {
  reject_unknown_keys(j, {"k_p", "k_i", "k_d", "derivative_enabled"}, where);
  PidOverrides o;
  if (j.contains("k_p")) o.k_p = decimal_field(j["k_p"], where + ".k_p");
  if (j.contains("k_i")) o.k_i = decimal_field(j["k_i"], where + ".k_i");
  if (j.contains("k_d")) o.k_d = decimal_field(j["k_d"], where + ".k_d");
  if (j.contains("derivative_enabled")) {
    if (!j["derivative_enabled"].is_boolean()) {
      throw ValidationError(where + ".derivative_enabled: expected true or false");
    }
    o.derivative_enabled = j["derivative_enabled"].get<bool>();
  }
  return o;
}

// Rates of one PID config over one scenario, sampled at the requested steps.
class ScenarioEvaluator {
 public:
  ScenarioEvaluator(const ScenarioSpec& spec, std::vector<std::int64_t> steps)
      : points_(generate(spec)), steps_(std::move(steps)) {
    std::sort(steps_.begin(), steps_.end());
    steps_.erase(std::unique(steps_.begin(), steps_.end()), steps_.end());
    for (auto s : steps_) {
      if (s < 1 || s > static_cast<std::int64_t>(points_.size())) {
        throw ValidationError("target step " + std::to_string(s) + " outside scenario of " +
                              std::to_string(points_.size()) + " steps");
      }
    }
  }

  std::vector<Decimal> rates(const PidConfig& config) const {
    std::vector<Decimal> out;
    out.reserve(steps_.size());
    PidState<Decimal> state;
    std::size_t next = 0;
    for (const auto& p : points_) {
      if (next == steps_.size()) break;
      auto stepped = update_and_rate(config, state, p.utilization, p.timestamp);
      state = stepped.state;
      if (p.step == steps_[next]) {
        out.push_back(stepped.breakdown.rate);
        ++next;
      }
    }
    return out;
  }

  Decimal rate_at(const std::vector<Decimal>& sampled, std::int64_t step) const {
    auto it = std::lower_bound(steps_.begin(), steps_.end(), step);
    return sampled[static_cast<std::size_t>(it - steps_.begin())];
  }

 private:
  std::vector<ScenarioPoint> points_;
  std::vector<std::int64_t> steps_;
};

std::string config_key(const std::string& scenario, const PidConfig& c) {
  auto raw = [](Decimal d) {
    auto r = d.raw();
    return std::to_string(static_cast<long long>(r / Decimal::kScale)) + ":" +
           std::to_string(static_cast<long long>(r % Decimal::kScale));
  };
  return scenario + "|" + raw(c.m) + "|" + raw(c.n) + "|" + raw(c.k_p) + "|" + raw(c.k_i) + "|" +
         raw(c.k_d) + "|" + (c.derivative_enabled ? "d" : "-");
}

Decimal relative_miss(Decimal rate, Decimal target) { return abs(rate - target) / target; }

class Scorer {
 public:
  explicit Scorer(const CalibrationProblem& problem) : problem_(problem) {
    if (problem.targets.empty()) throw ValidationError("calibration needs at least one target");
    std::map<std::string, std::vector<std::int64_t>> steps;
    for (const auto& t : problem.targets) {
      if (!problem.scenarios.count(t.scenario)) {
        throw ValidationError("target '" + t.name + "' names unknown scenario '" + t.scenario +
                              "'");
      }
      if (t.rate <= Decimal::zero()) {
        throw ValidationError("target '" + t.name + "' needs a positive rate");
      }
      steps[t.scenario].push_back(t.step);
    }
    for (auto& [name, s] : steps) {
      evaluators_.emplace(name, ScenarioEvaluator(problem.scenarios.at(name), s));
    }
  }

  const std::vector<Decimal>& sampled(const CalibrationTarget& t, const PidConfig& config) {
    const PidConfig effective = apply_overrides(config, t.overrides);
    const std::string key = config_key(t.scenario, effective);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      it = cache_.emplace(key, evaluators_.at(t.scenario).rates(effective)).first;
    }
    return it->second;
  }

  Decimal rate(const CalibrationTarget& t, const PidConfig& config) {
    return evaluators_.at(t.scenario).rate_at(sampled(t, config), t.step);
  }

  // Largest relative miss, abandoning the point once it cannot beat `bound`.
  std::optional<Decimal> max_miss(const PidConfig& config, std::optional<Decimal> bound) {
    Decimal worst = Decimal::zero();
    for (const auto& t : problem_.targets) {
      worst = std::max(worst, relative_miss(rate(t, config), t.rate));
      if (bound && worst >= *bound) return std::nullopt;
    }
    return worst;
  }

 private:
  const CalibrationProblem& problem_;
  std::map<std::string, ScenarioEvaluator> evaluators_;
  std::unordered_map<std::string, std::vector<Decimal>> cache_;
};

}  // namespace

CalibrationProblem calibration_problem_from_json(const json& j) {
  reject_unknown_keys(j, {"base", "scenarios", "targets"}, "targets");
  CalibrationProblem p;
  if (j.contains("base")) {
    json base = j["base"];
    reject_unknown_keys(base, {"u_optimal", "derivative_period", "derivative_enabled"},
                        "targets.base");
    base["m"] = "1";
    base["n"] = "1";
    p.base = pid_config_from_json(base, "targets.base");
  }
  if (!j.contains("scenarios") || !j["scenarios"].is_object()) {
    throw ValidationError("targets: missing 'scenarios' object");
  }
  for (const auto& [name, spec] : j["scenarios"].items()) {
    p.scenarios.emplace(name, scenario_from_json(spec));
  }
  if (!j.contains("targets") || !j["targets"].is_array()) {
    throw ValidationError("targets: missing 'targets' array");
  }
  for (std::size_t i = 0; i < j["targets"].size(); ++i) {
    const json& t = j["targets"][i];
    const std::string where = "targets[" + std::to_string(i) + "]";
    reject_unknown_keys(t, {"name", "scenario", "step", "rate", "tolerance", "overrides"}, where);
    CalibrationTarget target;
    target.name = t.value("name", where);
    target.scenario = t.at("scenario").get<std::string>();
    target.step = int_field(t.at("step"), where + ".step");
    target.rate = decimal_field(t.at("rate"), where + ".rate");
    target.tolerance = decimal_field(t.at("tolerance"), where + ".tolerance");
    if (t.contains("overrides")) target.overrides = overrides_from_json(t["overrides"], where);
    p.targets.push_back(std::move(target));
  }
  return p;
}

SearchSpace search_space_from_json(const json& j) {
  reject_unknown_keys(j, {"m", "n", "k_p", "k_i", "k_d"}, "space");
  SearchSpace s;
  auto axis = [&](const char* key, std::vector<Decimal>& into) {
    if (j.contains(key)) into = axis_from_json(j[key], std::string("space.") + key);
  };
  axis("m", s.m);
  axis("n", s.n);
  axis("k_p", s.k_p);
  axis("k_i", s.k_i);
  axis("k_d", s.k_d);
  return s;
}

PidConfig apply_overrides(PidConfig c, const PidOverrides& o) {
  if (o.k_p) c.k_p = *o.k_p;
  if (o.k_i) c.k_i = *o.k_i;
  if (o.k_d) c.k_d = *o.k_d;
  if (o.derivative_enabled) c.derivative_enabled = *o.derivative_enabled;
  return c;
}

PidConfig grid_config(const PidConfig& base, Decimal m, Decimal n, Decimal k_p, Decimal k_i,
                      Decimal k_d) {
  PidConfig c = base;
  c.m = m;
  c.n = n;
  c.k_p = k_p;
  c.k_i = k_i;
  c.k_d = k_d;
  return c;
}

std::vector<TargetOutcome> evaluate_targets(const CalibrationProblem& problem,
                                            const PidConfig& config) {
  Scorer scorer(problem);
  std::vector<TargetOutcome> out;
  for (const auto& t : problem.targets) {
    TargetOutcome o;
    o.name = t.name;
    o.rate = scorer.rate(t, config);
    o.target = t.rate;
    o.tolerance = t.tolerance;
    o.miss = relative_miss(o.rate, t.rate);
    o.within = abs(o.rate - t.rate) <= t.tolerance;
    out.push_back(std::move(o));
  }
  return out;
}

CalibrationResult calibrate(const CalibrationProblem& problem, const SearchSpace& space) {
  if (space.size() == 0) {
    throw ValidationError("empty search space: every axis (m, n, k_p, k_i, k_d) needs a value");
  }
  Scorer scorer(problem);
  CalibrationResult result;
  std::optional<Decimal> best;
  for (Decimal m : space.m) {
    for (Decimal n : space.n) {
      for (Decimal k_p : space.k_p) {
        for (Decimal k_i : space.k_i) {
          for (Decimal k_d : space.k_d) {
            const PidConfig point = grid_config(problem.base, m, n, k_p, k_i, k_d);
            ++result.evaluated;
            std::optional<Decimal> miss;
            try {
              validate(point);
              miss = scorer.max_miss(point, best);
            } catch (const Error&) {
              continue;  // unusable corner of the grid
            }
            if (miss) {
              best = miss;
              result.best = point;
            }
          }
        }
      }
    }
  }
  if (!best) throw ValidationError("no grid point produced a valid evaluation");
  result.max_miss = *best;
  result.outcomes = evaluate_targets(problem, result.best);
  result.feasible = std::all_of(result.outcomes.begin(), result.outcomes.end(),
                                [](const TargetOutcome& o) { return o.within; });
  return result;
}

json to_json(const CalibrationResult& r) {
  json j;
  j["pid"] = to_json(r.best);
  j["max_relative_miss"] = r.max_miss.to_string();
  j["feasible"] = r.feasible;
  j["evaluated"] = r.evaluated;
  j["targets"] = json::array();
  for (const auto& o : r.outcomes) {
    j["targets"].push_back({{"name", o.name},
                            {"rate", o.rate.to_string()},
                            {"target", o.target.to_string()},
                            {"tolerance", o.tolerance.to_string()},
                            {"relative_miss", o.miss.to_string()},
                            {"within_tolerance", o.within}});
  }
  return j;
}

}  // namespace ratelab

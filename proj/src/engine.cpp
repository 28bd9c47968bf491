#include "ratelab/engine.hpp"

#include <algorithm>
#include <set>

#include "ratelab/errors.hpp"
#include "ratelab/reference_real.hpp"

namespace ratelab {

namespace {

template <Numeric Num>
StrategyCell to_cell(const StepResult<Num>& r) {
  StrategyCell cell;
  cell.rate = to_decimal(r.rate);
  if (r.breakdown) {
    const auto& b = *r.breakdown;
    cell.breakdown = ControllerBreakdown<Decimal>{
        to_decimal(b.u_error), to_decimal(b.u_p),  to_decimal(b.u_i),
        to_decimal(b.u_i_raw), to_decimal(b.u_d),  to_decimal(b.controller_error),
        to_decimal(b.rate)};
  }
  return cell;
}

template <class F>
auto at_step(std::int64_t step, F&& body) {
  try {
    return body();
  } catch (const SimulationError&) {
    throw;
  } catch (const Error& e) {
    throw SimulationError(step, e.what());
  }
}

template <Numeric Num>
SimTrace run_impl(const std::vector<StrategySpec>& specs, const ScenarioSpec& spec) {
  validate(spec);
  if (specs.empty()) throw ValidationError("run needs at least one strategy");
  std::set<std::string> names;
  for (const auto& s : specs) {
    validate(s);
    if (!names.insert(s.name).second) {
      throw ValidationError("duplicate strategy name '" + s.name + "'");
    }
  }
  if (spec.feedback && specs.size() != 1) {
    throw ValidationError("closed-loop (feedback) runs take exactly one strategy");
  }

  const std::vector<ScenarioPoint> points = generate(spec);
  SimTrace trace;
  for (const auto& s : specs) {
    trace.strategies.push_back({s.name, std::string(kind_name(s.config)),
                                target_utilization(s.config),
                                std::holds_alternative<PidConfig>(s.config)});
  }
  trace.rows.resize(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    trace.rows[k].step = points[k].step;
    trace.rows[k].timestamp = points[k].timestamp;
    trace.rows[k].utilization = points[k].utilization;
    trace.rows[k].cells.resize(specs.size());
  }

  if (!spec.feedback) {
    for (std::size_t i = 0; i < specs.size(); ++i) {
      Strategy<Num> strategy(specs[i]);
      for (std::size_t k = 0; k < points.size(); ++k) {
        trace.rows[k].cells[i] = at_step(points[k].step, [&] {
          return to_cell(strategy.step(Num{points[k].utilization}, points[k].timestamp));
        });
      }
      trace.final_states.push_back(strategy.state_snapshot());
    }
    return trace;
  }

  const FeedbackModel& model = *spec.feedback;
  const auto delay = static_cast<std::size_t>(model.delay);
  Strategy<Num> strategy(specs.front());
  NoiseSource noise(feedback_seed(spec.seed));
  std::vector<Num> rates;
  rates.reserve(points.size());
  Num u_prev{};
  for (std::size_t k = 0; k < points.size(); ++k) {
    at_step(points[k].step, [&] {
      Num u = k < delay ? Num{points[k].utilization}
                        : feedback_next(model, u_prev, rates[k - delay],
                                        Num{noise.uniform(model.noise_volatility)});
      StepResult<Num> r = strategy.step(u, points[k].timestamp);
      trace.rows[k].utilization = to_decimal(u);
      trace.rows[k].cells[0] = to_cell(r);
      rates.push_back(r.rate);
      u_prev = u;
      return 0;
    });
  }
  trace.final_states.push_back(strategy.state_snapshot());
  return trace;
}

}  // namespace

std::size_t SimTrace::strategy_index(std::string_view name) const {
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    if (strategies[i].name == name) return i;
  }
  throw ValidationError("trace has no strategy named '" + std::string(name) + "'");
}

SimTrace run(const std::vector<StrategySpec>& strategies, const ScenarioSpec& spec,
             Backend backend) {
  if (backend == Backend::reference) return run_impl<ReferenceReal>(strategies, spec);
  return run_impl<Decimal>(strategies, spec);
}

bool within_relative(Decimal actual, Decimal reference, Decimal tolerance) {
  static const Decimal floor = Decimal::parse("0.000000001");
  const Decimal scale = std::max(abs(reference), floor);
  return abs(actual - reference) <= tolerance * scale;
}

Decimal rate_at(const SimTrace& trace, std::string_view strategy, std::int64_t step) {
  const std::size_t i = trace.strategy_index(strategy);
  for (const auto& row : trace.rows) {
    if (row.step == step) return row.cells[i].rate;
  }
  throw ValidationError("trace has no step " + std::to_string(step));
}

std::int64_t time_above(const SimTrace& trace, Decimal threshold) {
  return std::count_if(trace.rows.begin(), trace.rows.end(),
                       [&](const TraceRow& r) { return r.utilization > threshold; });
}

std::vector<Metrics> compute_metrics(const SimTrace& trace, Decimal band) {
  if (trace.rows.empty()) throw ValidationError("cannot compute metrics of an empty trace");

  std::size_t inflection = 0;
  for (std::size_t k = 1; k < trace.rows.size(); ++k) {
    if (trace.rows[k].utilization > trace.rows[inflection].utilization) inflection = k;
  }

  std::vector<Metrics> out;
  for (std::size_t i = 0; i < trace.strategies.size(); ++i) {
    Metrics m;
    m.strategy = trace.strategies[i].name;
    const Decimal target = trace.strategies[i].target;
    m.inflection_step = trace.rows[inflection].step;
    m.rate_at_inflection = trace.rows[inflection].cells[i].rate;

    Decimal after_peak = m.rate_at_inflection;
    m.max_rate = trace.rows.front().cells[i].rate;
    for (std::size_t k = 0; k < trace.rows.size(); ++k) {
      const Decimal r = trace.rows[k].cells[i].rate;
      m.max_rate = std::max(m.max_rate, r);
      if (k >= inflection) after_peak = std::max(after_peak, r);
    }
    if (m.rate_at_inflection != Decimal::zero()) m.overshoot = after_peak / m.rate_at_inflection;

    // Settled from the first step after the last excursion outside the band.
    std::size_t settled_from = 0;
    for (std::size_t k = 0; k < trace.rows.size(); ++k) {
      if (abs(trace.rows[k].utilization - target) >= band) settled_from = k + 1;
    }
    m.settled = settled_from < trace.rows.size();
    m.settling_time = m.settled ? static_cast<std::int64_t>(settled_from)
                                : static_cast<std::int64_t>(trace.rows.size()) + 1;
    m.time_above_target = time_above(trace, target);
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace ratelab

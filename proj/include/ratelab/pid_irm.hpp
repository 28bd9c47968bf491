#pragma once

#include <algorithm>
#include <cstdint>
#include <string>

#include "ratelab/decimal.hpp"
#include "ratelab/errors.hpp"
#include "ratelab/numeric.hpp"
#include "ratelab/snapshot.hpp"

namespace ratelab {

struct PidConfig {
  Decimal k_p = Decimal::one();
  Decimal k_i;  // per second
  Decimal k_d;
  Decimal u_optimal = Decimal::from_raw(Decimal::kScale / 2);
  Decimal m = Decimal::one();
  Decimal n = Decimal::one();
  std::int64_t derivative_period = 36000;  // seconds
  bool derivative_enabled = true;
};

void validate(const PidConfig& config);

/// Controller memory. `twce` is the running sum of error * elapsed seconds;
/// the previous/delayed slots hold two samples of it at least one
/// derivative period apart.
template <Numeric Num>
struct PidState {
  Num twce{};
  Timestamp last_update = 0;
  Num twce_previous{};
  Timestamp t_previous = 0;
  Num twce_delayed{};
  Timestamp t_delayed = 0;
  bool initialized = false;

  friend bool operator==(const PidState&, const PidState&) = default;
};

template <Numeric Num>
struct ControllerBreakdown {
  Num u_error{};
  Num u_p{};
  Num u_i{};      // after the anti-windup floor
  Num u_i_raw{};  // k_i * twce
  Num u_d{};
  Num controller_error{};  // clamped to [-1, 1]
  Num rate{};

  friend bool operator==(const ControllerBreakdown&, const ControllerBreakdown&) = default;
};

template <Numeric Num>
struct IntegralTerm {
  Num applied{};
  Num raw{};
};

template <Numeric Num>
struct PidStep {
  PidState<Num> state;
  ControllerBreakdown<Num> breakdown;
};

/// Maps utilization onto [-1, 1]: [0, u_optimal] -> [-1, 0] and
/// [u_optimal, 1] -> [0, 1], each piece linear.
template <Numeric Num>
Num normalize_error(const Num& u, const Num& u_optimal) {
  const Num zero{};
  const Num one{Decimal::one()};
  if (u < zero || one < u) {
    throw DomainError("utilization outside [0, 1]: " + to_decimal(u).to_string());
  }
  if (!(zero < u_optimal && u_optimal < one)) {
    throw DomainError("optimal utilization outside (0, 1): " + to_decimal(u_optimal).to_string());
  }
  if (u < u_optimal || u == u_optimal) return (u - u_optimal) / u_optimal;
  return (u - u_optimal) / (one - u_optimal);
}

template <Numeric Num>
Num proportional(const Num& e, const Num& k_p) {
  return k_p * e;
}

/// Adds e * (now - last_update) to the accumulator, then rotates the delay
/// slots once at least `derivative_period` seconds separate `now` from the
/// delayed sample. The first call only records the start time.
template <Numeric Num>
PidState<Num> accumulate(PidState<Num> state, const Num& e, Timestamp now,
                         std::int64_t derivative_period) {
  if (!state.initialized) {
    state = PidState<Num>{};
    state.last_update = now;
    state.t_previous = now;
    state.t_delayed = now;
    state.initialized = true;
    return state;
  }
  if (now < state.last_update) {
    throw ClockRegression("update at t=" + std::to_string(now) + " precedes last update at t=" +
                          std::to_string(state.last_update));
  }
  state.twce = state.twce + e * Num::from_int(now - state.last_update);
  state.last_update = now;
  if (now - state.t_delayed >= derivative_period) {
    state.twce_previous = state.twce_delayed;
    state.t_previous = state.t_delayed;
    state.twce_delayed = state.twce;
    state.t_delayed = now;
  }
  return state;
}

/// k_i * twce, floored at -0.5 * u_p while utilization is above optimal.
/// The floor applies to the output only; the accumulator keeps its memory.
template <Numeric Num>
IntegralTerm<Num> integral_term(const PidState<Num>& state, const Num& k_i, const Num& u_p,
                                const Num& e) {
  IntegralTerm<Num> out;
  out.raw = k_i * state.twce;
  out.applied = out.raw;
  if (Num{} < e) {
    const Num floor = -(Num{Decimal::from_raw(Decimal::kScale / 2)} * u_p);
    if (out.applied < floor) out.applied = floor;
  }
  return out;
}

/// k_d times the slope of the accumulator between the two delay slots. Zero
/// until the slots hold distinct timestamps.
template <Numeric Num>
Num derivative_term(const PidState<Num>& state, const Num& k_d, bool enabled = true) {
  if (!enabled || !state.initialized || state.t_delayed == state.t_previous) return Num{};
  return k_d * ((state.twce_delayed - state.twce_previous) /
                Num::from_int(state.t_delayed - state.t_previous));
}

/// r = m * ((e + 1) / 2)^n for e in [-1, 1].
template <Numeric Num>
Num transfer_function(const Num& controller_error, const Num& m, const Num& n) {
  const Num one{Decimal::one()};
  const Num two = Num::from_int(2);
  if (controller_error < -one || one < controller_error) {
    throw DomainError("controller error outside [-1, 1]: " +
                      to_decimal(controller_error).to_string());
  }
  return m * pow((controller_error + one) / two, n);
}

/// Shape exponent that puts the curve through (u_optimal, r_o):
/// n = ln(m / r_o) / ln 2.
template <Numeric Num = Decimal>
Num solve_shape(const Num& u_optimal, const Num& r_o, const Num& m) {
  (void)u_optimal;  // the anchor sits at zero normalized error for any u_optimal
  if (!(Num{} < r_o)) throw InfeasibleAnchor("anchor rate must be positive");
  if (!(r_o < m)) {
    throw InfeasibleAnchor("anchor rate " + to_decimal(r_o).to_string() +
                           " must be below the scale m = " + to_decimal(m).to_string());
  }
  return ln(m / r_o) / ln(Num::from_int(2));
}

template <Numeric Num>
PidStep<Num> update_and_rate(const PidConfig& config, const PidState<Num>& state, const Num& u,
                             Timestamp now) {
  const Num one{Decimal::one()};
  PidStep<Num> out;
  auto& b = out.breakdown;
  b.u_error = normalize_error(u, Num{config.u_optimal});
  out.state = accumulate(state, b.u_error, now, config.derivative_period);
  b.u_p = proportional(b.u_error, Num{config.k_p});
  auto integral = integral_term(out.state, Num{config.k_i}, b.u_p, b.u_error);
  b.u_i = integral.applied;
  b.u_i_raw = integral.raw;
  b.u_d = derivative_term(out.state, Num{config.k_d}, config.derivative_enabled);
  b.controller_error = std::clamp(b.u_p + b.u_i + b.u_d, -one, one);
  b.rate = transfer_function(b.controller_error, Num{config.m}, Num{config.n});
  return out;
}

template <Numeric Num>
Snapshot snapshot(const PidState<Num>& s) {
  return {
      {"twce", to_decimal(s.twce).to_string()},
      {"last_update", std::to_string(s.last_update)},
      {"twce_previous", to_decimal(s.twce_previous).to_string()},
      {"t_previous", std::to_string(s.t_previous)},
      {"twce_delayed", to_decimal(s.twce_delayed).to_string()},
      {"t_delayed", std::to_string(s.t_delayed)},
      {"initialized", s.initialized ? "1" : "0"},
  };
}

PidState<Decimal> pid_state_from_snapshot(const Snapshot& record);

}  // namespace ratelab

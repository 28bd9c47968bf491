#pragma once

#include <cstdint>
#include <string>

#include "ratelab/decimal.hpp"
#include "ratelab/errors.hpp"
#include "ratelab/numeric.hpp"
#include "ratelab/pid_irm.hpp"
#include "ratelab/snapshot.hpp"

namespace ratelab {

// ---------------------------------------------------------------------------
// Aave: kinked piecewise-linear curve of instantaneous utilization.
// ---------------------------------------------------------------------------

struct AaveConfig {
  Decimal base_rate;
  Decimal slope1;
  Decimal slope2;
  Decimal u_kink = Decimal::from_raw(Decimal::kScale / 2);
};

void validate(const AaveConfig& config);

template <Numeric Num>
Num aave_rate(const AaveConfig& c, const Num& u) {
  const Num zero{};
  const Num one{Decimal::one()};
  if (u < zero || one < u) {
    throw DomainError("utilization outside [0, 1]: " + to_decimal(u).to_string());
  }
  const Num kink{c.u_kink};
  const Num base{c.base_rate};
  const Num slope1{c.slope1};
  if (u < kink || u == kink) return base + slope1 * u / kink;
  return base + slope1 + Num{c.slope2} * (u - kink) / (one - kink);
}

// ---------------------------------------------------------------------------
// Ajna: the rate is scaled up or down once per completed epoch depending on
// which side of the target utilization the market sits.
// ---------------------------------------------------------------------------

struct AjnaConfig {
  Decimal target_utilization = Decimal::from_raw(Decimal::kScale / 2);
  std::int64_t epoch_seconds = 43200;
  Decimal up_factor = Decimal::from_raw(1'100'000'000'000'000'000);
  Decimal down_factor = Decimal::from_raw(900'000'000'000'000'000);
  Decimal initial_rate = Decimal::from_raw(100'000'000'000'000'000);
};

void validate(const AjnaConfig& config);

template <Numeric Num>
struct AjnaState {
  Num current_rate{};
  Timestamp last_epoch_boundary = 0;
  bool initialized = false;

  friend bool operator==(const AjnaState&, const AjnaState&) = default;
};

/// Applies one factor per whole epoch elapsed since the last boundary, all
/// judged against the utilization passed in. At exactly the target the rate
/// is left alone. The first call starts the epoch clock.
template <Numeric Num>
AjnaState<Num> ajna_step(const AjnaConfig& c, AjnaState<Num> state, const Num& u, Timestamp now) {
  if (!state.initialized) {
    state.current_rate = Num{c.initial_rate};
    state.last_epoch_boundary = now;
    state.initialized = true;
    return state;
  }
  if (now < state.last_epoch_boundary) {
    throw ClockRegression("ajna update at t=" + std::to_string(now) +
                          " precedes epoch boundary t=" +
                          std::to_string(state.last_epoch_boundary));
  }
  const Num target{c.target_utilization};
  const std::int64_t epochs = (now - state.last_epoch_boundary) / c.epoch_seconds;
  for (std::int64_t i = 0; i < epochs; ++i) {
    if (target < u) {
      state.current_rate = state.current_rate * Num{c.up_factor};
    } else if (u < target) {
      state.current_rate = state.current_rate * Num{c.down_factor};
    }
  }
  state.last_epoch_boundary += epochs * c.epoch_seconds;
  return state;
}

template <Numeric Num>
Snapshot snapshot(const AjnaState<Num>& s) {
  return {
      {"current_rate", to_decimal(s.current_rate).to_string()},
      {"last_epoch_boundary", std::to_string(s.last_epoch_boundary)},
      {"initialized", s.initialized ? "1" : "0"},
  };
}

// ---------------------------------------------------------------------------
// Morpho AdaptiveCurve: log(rate) integrates k_p * err over time, and the
// quoted rate follows a piecewise-linear curve around the rate at target:
//   rate = rate_at_target * curve(err),  curve(0) = 1.
// The curve term is applied as an exact ratio, so a jump in u with no time
// elapsed moves the rate by curve(err') / curve(err) only.
// ---------------------------------------------------------------------------

struct MorphoConfig {
  Decimal k_p;  // per second
  Decimal u_target = Decimal::from_raw(900'000'000'000'000'000);
  Decimal slope_below = Decimal::from_raw(750'000'000'000'000'000);  // must stay < 1
  Decimal slope_above = Decimal::from_int(3);
  Decimal initial_rate_at_target = Decimal::from_raw(40'000'000'000'000'000);
  Decimal min_rate_at_target = Decimal::from_raw(1'000'000'000'000'000);
  Decimal max_rate_at_target = Decimal::from_int(2);
};

void validate(const MorphoConfig& config);

template <Numeric Num>
struct MorphoState {
  Num rate_at_target{};
  Timestamp last_update = 0;
  Num last_u{};
  bool initialized = false;

  friend bool operator==(const MorphoState&, const MorphoState&) = default;
};

template <Numeric Num>
struct MorphoStep {
  MorphoState<Num> state;
  Num rate{};
};

template <Numeric Num>
Num morpho_curve(const MorphoConfig& c, const Num& err) {
  const Num one{Decimal::one()};
  if (err < Num{}) return one + Num{c.slope_below} * err;
  return one + Num{c.slope_above} * err;
}

template <Numeric Num>
MorphoStep<Num> morpho_step(const MorphoConfig& c, MorphoState<Num> state, const Num& u,
                            Timestamp now) {
  const Num err = normalize_error(u, Num{c.u_target});
  if (!state.initialized) {
    state.rate_at_target = Num{c.initial_rate_at_target};
    state.last_update = now;
    state.initialized = true;
  } else {
    if (now < state.last_update) {
      throw ClockRegression("morpho update at t=" + std::to_string(now) +
                            " precedes last update at t=" + std::to_string(state.last_update));
    }
    const Num growth = Num{c.k_p} * err * Num::from_int(now - state.last_update);
    const Num lo{c.min_rate_at_target};
    const Num hi{c.max_rate_at_target};
    // Past ln(hi / lo) the bound is reached whatever the current level, and
    // exp() of a long gap would overflow.
    const Num span = ln(hi / lo);
    Num next;
    if (span < growth) {
      next = hi;
    } else if (growth < -span) {
      next = lo;
    } else {
      next = state.rate_at_target * exp(growth);
      if (next < lo) next = lo;
      if (hi < next) next = hi;
    }
    state.rate_at_target = next;
    state.last_update = now;
  }
  state.last_u = u;
  return {state, state.rate_at_target * morpho_curve(c, err)};
}

template <Numeric Num>
Snapshot snapshot(const MorphoState<Num>& s) {
  return {
      {"rate_at_target", to_decimal(s.rate_at_target).to_string()},
      {"last_update", std::to_string(s.last_update)},
      {"last_u", to_decimal(s.last_u).to_string()},
      {"initialized", s.initialized ? "1" : "0"},
  };
}

}  // namespace ratelab

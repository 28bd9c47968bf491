#include "ratelab/pid_irm.hpp"

namespace ratelab {

void validate(const PidConfig& c) {
  if (!(Decimal::zero() < c.u_optimal && c.u_optimal < Decimal::one())) {
    throw ValidationError("pid: u_optimal must lie in (0, 1)");
  }
  if (c.m <= Decimal::zero()) throw ValidationError("pid: m must be positive");
  if (c.n <= Decimal::zero()) throw ValidationError("pid: n must be positive");
  if (c.k_p < Decimal::zero() || c.k_i < Decimal::zero() || c.k_d < Decimal::zero()) {
    throw ValidationError("pid: gains must be non-negative");
  }
  if (c.derivative_period <= 0) throw ValidationError("pid: derivative_period must be positive");
}

PidState<Decimal> pid_state_from_snapshot(const Snapshot& record) {
  PidState<Decimal> s;
  s.twce = snapshot_decimal(record, "twce");
  s.last_update = snapshot_int(record, "last_update");
  s.twce_previous = snapshot_decimal(record, "twce_previous");
  s.t_previous = snapshot_int(record, "t_previous");
  s.twce_delayed = snapshot_decimal(record, "twce_delayed");
  s.t_delayed = snapshot_int(record, "t_delayed");
  s.initialized = snapshot_int(record, "initialized") != 0;
  return s;
}

}  // namespace ratelab

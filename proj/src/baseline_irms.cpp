#include "ratelab/baseline_irms.hpp"

namespace ratelab {

namespace {

bool in_open_unit(Decimal d) { return Decimal::zero() < d && d < Decimal::one(); }

}  // namespace

void validate(const AaveConfig& c) {
  if (c.base_rate < Decimal::zero() || c.slope1 < Decimal::zero() || c.slope2 < Decimal::zero()) {
    throw ValidationError("aave: base_rate and slopes must be non-negative");
  }
  if (!in_open_unit(c.u_kink)) throw ValidationError("aave: u_kink must lie in (0, 1)");
}

void validate(const AjnaConfig& c) {
  if (!in_open_unit(c.target_utilization)) {
    throw ValidationError("ajna: target_utilization must lie in (0, 1)");
  }
  if (c.epoch_seconds <= 0) throw ValidationError("ajna: epoch_seconds must be positive");
  if (c.up_factor <= Decimal::zero() || c.down_factor <= Decimal::zero()) {
    throw ValidationError("ajna: factors must be positive");
  }
  if (c.initial_rate <= Decimal::zero()) throw ValidationError("ajna: initial_rate must be positive");
}

void validate(const MorphoConfig& c) {
  if (!in_open_unit(c.u_target)) throw ValidationError("morpho: u_target must lie in (0, 1)");
  if (c.k_p < Decimal::zero()) throw ValidationError("morpho: k_p must be non-negative");
  if (c.slope_below < Decimal::zero() || c.slope_below >= Decimal::one()) {
    throw ValidationError("morpho: slope_below must lie in [0, 1) so the curve stays positive");
  }
  if (c.slope_above < Decimal::zero()) throw ValidationError("morpho: slope_above must be non-negative");
  if (c.min_rate_at_target <= Decimal::zero() || c.max_rate_at_target < c.min_rate_at_target) {
    throw ValidationError("morpho: need 0 < min_rate_at_target <= max_rate_at_target");
  }
  if (c.initial_rate_at_target < c.min_rate_at_target ||
      c.initial_rate_at_target > c.max_rate_at_target) {
    throw ValidationError("morpho: initial_rate_at_target outside [min, max]");
  }
}

}  // namespace ratelab

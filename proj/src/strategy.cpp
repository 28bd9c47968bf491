#include "ratelab/strategy.hpp"

namespace ratelab {

std::string_view kind_name(const IrmConfig& config) {
  switch (config.index()) {
    case 0:
      return "pid";
    case 1:
      return "aave";
    case 2:
      return "ajna";
    default:
      return "morpho";
  }
}

Decimal target_utilization(const IrmConfig& config) {
  return std::visit(
      [](const auto& c) -> Decimal {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, PidConfig>) return c.u_optimal;
        if constexpr (std::is_same_v<C, AaveConfig>) return c.u_kink;
        if constexpr (std::is_same_v<C, AjnaConfig>) return c.target_utilization;
        if constexpr (std::is_same_v<C, MorphoConfig>) return c.u_target;
      },
      config);
}

void validate(const StrategySpec& spec) {
  if (spec.name.empty()) throw ValidationError("strategy name must not be empty");
  for (char ch : spec.name) {
    bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
              ch == '_' || ch == '-';
    if (!ok) {
      throw ValidationError("strategy name '" + spec.name +
                            "' may only contain letters, digits, '_' and '-'");
    }
  }
  std::visit([](const auto& c) { validate(c); }, spec.config);
}

}  // namespace ratelab

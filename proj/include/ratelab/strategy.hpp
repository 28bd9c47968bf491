#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "ratelab/baseline_irms.hpp"
#include "ratelab/numeric.hpp"
#include "ratelab/pid_irm.hpp"
#include "ratelab/snapshot.hpp"

namespace ratelab {

using IrmConfig = std::variant<PidConfig, AaveConfig, AjnaConfig, MorphoConfig>;

struct StrategySpec {
  std::string name;
  IrmConfig config;
};

// "pid", "aave", "ajna" or "morpho".
std::string_view kind_name(const IrmConfig& config);

// The utilization each model steers toward (or kinks at, for Aave).
Decimal target_utilization(const IrmConfig& config);

void validate(const StrategySpec& spec);

template <Numeric Num>
struct StepResult {
  Num rate{};
  std::optional<ControllerBreakdown<Num>> breakdown;  // PID only
};

/// One market's interest rate model plus its mutable state.
template <Numeric Num>
class Strategy {
 public:
  explicit Strategy(StrategySpec spec) : spec_(std::move(spec)) {
    validate(spec_);
    std::visit(
        [this](const auto& cfg) {
          using C = std::decay_t<decltype(cfg)>;
          if constexpr (std::is_same_v<C, PidConfig>) state_ = PidState<Num>{};
          if constexpr (std::is_same_v<C, AaveConfig>) state_ = std::monostate{};
          if constexpr (std::is_same_v<C, AjnaConfig>) state_ = AjnaState<Num>{};
          if constexpr (std::is_same_v<C, MorphoConfig>) state_ = MorphoState<Num>{};
        },
        spec_.config);
  }

  const StrategySpec& spec() const { return spec_; }
  const std::string& name() const { return spec_.name; }

  StepResult<Num> step(const Num& u, Timestamp now) {
    return std::visit(
        [&](const auto& cfg) -> StepResult<Num> {
          using C = std::decay_t<decltype(cfg)>;
          if constexpr (std::is_same_v<C, PidConfig>) {
            auto next = update_and_rate(cfg, std::get<PidState<Num>>(state_), u, now);
            state_ = next.state;
            return {next.breakdown.rate, next.breakdown};
          } else if constexpr (std::is_same_v<C, AaveConfig>) {
            return {aave_rate(cfg, u), std::nullopt};
          } else if constexpr (std::is_same_v<C, AjnaConfig>) {
            auto next = ajna_step(cfg, std::get<AjnaState<Num>>(state_), u, now);
            state_ = next;
            return {next.current_rate, std::nullopt};
          } else {
            auto next = morpho_step(cfg, std::get<MorphoState<Num>>(state_), u, now);
            state_ = next.state;
            return {next.rate, std::nullopt};
          }
        },
        spec_.config);
  }

  Snapshot state_snapshot() const {
    return std::visit(
        [](const auto& s) -> Snapshot {
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, std::monostate>) {
            return {};
          } else {
            return snapshot(s);
          }
        },
        state_);
  }

 private:
  StrategySpec spec_;
  std::variant<std::monostate, PidState<Num>, AjnaState<Num>, MorphoState<Num>> state_;
};

}  // namespace ratelab

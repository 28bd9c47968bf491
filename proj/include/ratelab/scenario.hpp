#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "ratelab/decimal.hpp"
#include "ratelab/numeric.hpp"

namespace ratelab {

enum class SegmentKind { linear_ramp, hold, step, random_walk };

std::string_view to_string(SegmentKind kind);
SegmentKind segment_kind_from_string(std::string_view text);

// Unset starts and values continue from the previous segment's last
// utilization (0 before the first segment).
struct Segment {
  SegmentKind kind = SegmentKind::hold;
  std::int64_t duration = 1;           // steps
  std::optional<Decimal> start;        // linear-ramp, random-walk
  Decimal end;                         // linear-ramp
  std::optional<Decimal> value;        // hold, step (absolute level)
  Decimal size;                        // step (relative jump, used when value is unset)
  Decimal volatility;                  // random-walk: max |increment| per step
};

// Linear utilization response to the rate seen `delay` steps earlier.
struct FeedbackModel {
  Decimal elasticity;  // utilization per unit of rate, per step
  Decimal reference_rate;
  std::int64_t delay = 1;  // steps
  Decimal noise_volatility;
};

struct ScenarioSpec {
  std::vector<Segment> segments;
  std::int64_t dt = 3600;  // seconds per step
  std::uint64_t seed = 0;
  std::optional<FeedbackModel> feedback;
};

struct ScenarioPoint {
  std::int64_t step = 0;  // 1-based
  Timestamp timestamp = 0;
  Decimal utilization;
};

void validate(const ScenarioSpec& spec);

std::int64_t total_steps(const ScenarioSpec& spec);

/// Open-loop utilization path. Step k sits at timestamp k * dt; values are
/// clamped to [0, 1]. Random walks draw from a NoiseSource seeded with
/// `spec.seed`.
std::vector<ScenarioPoint> generate(const ScenarioSpec& spec);

/// Uniform noise on [-amplitude, amplitude] with 18-digit resolution, driven
/// by std::mt19937_64 so streams are reproducible on any conforming library.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed) : engine_(seed) {}

  Decimal uniform(Decimal amplitude);

 private:
  std::mt19937_64 engine_;
};

// Seed of the feedback-noise stream, kept apart from the random-walk stream.
std::uint64_t feedback_seed(std::uint64_t scenario_seed);

/// u' = clamp(u_prev - elasticity * (rate_delayed - reference_rate) + noise, 0, 1)
template <Numeric Num>
Num feedback_next(const FeedbackModel& model, const Num& u_prev, const Num& rate_delayed,
                  const Num& noise) {
  const Num next =
      u_prev - Num{model.elasticity} * (rate_delayed - Num{model.reference_rate}) + noise;
  return std::clamp(next, Num{}, Num{Decimal::one()});
}

}  // namespace ratelab

#include "ratelab/scenario.hpp"

#include <string>

#include "ratelab/errors.hpp"

namespace ratelab {

namespace {

bool in_unit(Decimal d) { return Decimal::zero() <= d && d <= Decimal::one(); }

Decimal clamp_unit(Decimal d) { return std::clamp(d, Decimal::zero(), Decimal::one()); }

void require_unit(const std::optional<Decimal>& d, const char* what, std::size_t index) {
  if (d && !in_unit(*d)) {
    throw ValidationError("segment " + std::to_string(index) + ": " + what + " outside [0, 1]");
  }
}

}  // namespace

std::string_view to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::linear_ramp:
      return "linear-ramp";
    case SegmentKind::hold:
      return "hold";
    case SegmentKind::step:
      return "step";
    case SegmentKind::random_walk:
      return "random-walk";
  }
  return "hold";
}

SegmentKind segment_kind_from_string(std::string_view text) {
  if (text == "linear-ramp") return SegmentKind::linear_ramp;
  if (text == "hold") return SegmentKind::hold;
  if (text == "step") return SegmentKind::step;
  if (text == "random-walk") return SegmentKind::random_walk;
  throw ValidationError("unknown segment kind '" + std::string(text) + "'");
}

void validate(const ScenarioSpec& spec) {
  if (spec.dt <= 0) throw ValidationError("scenario dt must be positive");
  if (spec.segments.empty()) throw ValidationError("scenario needs at least one segment");
  for (std::size_t i = 0; i < spec.segments.size(); ++i) {
    const Segment& s = spec.segments[i];
    if (s.duration < 1) {
      throw ValidationError("segment " + std::to_string(i) + ": duration must be >= 1");
    }
    require_unit(s.start, "start", i);
    require_unit(s.value, "value", i);
    if (s.kind == SegmentKind::linear_ramp) require_unit(s.end, "end", i);
    if (s.volatility < Decimal::zero()) {
      throw ValidationError("segment " + std::to_string(i) + ": volatility must be non-negative");
    }
  }
  if (spec.feedback) {
    const FeedbackModel& f = *spec.feedback;
    if (f.delay < 1) throw ValidationError("feedback delay must be >= 1 step");
    if (f.elasticity < Decimal::zero()) throw ValidationError("feedback elasticity must be non-negative");
    if (f.reference_rate < Decimal::zero()) throw ValidationError("feedback reference_rate must be non-negative");
    if (f.noise_volatility < Decimal::zero()) {
      throw ValidationError("feedback noise_volatility must be non-negative");
    }
  }
}

std::int64_t total_steps(const ScenarioSpec& spec) {
  std::int64_t n = 0;
  for (const auto& s : spec.segments) n += s.duration;
  return n;
}

Decimal NoiseSource::uniform(Decimal amplitude) {
  if (amplitude == Decimal::zero()) {
    engine_.discard(1);
    return Decimal::zero();
  }
  constexpr std::uint64_t kSpan = 2 * static_cast<std::uint64_t>(Decimal::kScale) + 1;
  // Rejection keeps the draw unbiased; 2^64 is not a multiple of the span.
  constexpr std::uint64_t kLimit = ~std::uint64_t{0} - (~std::uint64_t{0} % kSpan + 1) % kSpan;
  std::uint64_t draw = engine_();
  while (draw > kLimit) draw = engine_();
  draw %= kSpan;
  const Decimal unit = Decimal::from_raw(static_cast<Decimal::rep>(draw) - Decimal::kScale);
  return amplitude * unit;
}

std::uint64_t feedback_seed(std::uint64_t scenario_seed) {
  return scenario_seed ^ 0x9E3779B97F4A7C15ULL;
}

std::vector<ScenarioPoint> generate(const ScenarioSpec& spec) {
  validate(spec);
  std::vector<ScenarioPoint> out;
  out.reserve(static_cast<std::size_t>(total_steps(spec)));
  NoiseSource noise(spec.seed);
  Decimal u = Decimal::zero();
  std::int64_t step = 0;

  auto emit = [&](Decimal value) {
    u = clamp_unit(value);
    ++step;
    out.push_back({step, step * spec.dt, u});
  };

  for (const Segment& s : spec.segments) {
    switch (s.kind) {
      case SegmentKind::linear_ramp: {
        const Decimal from = s.start.value_or(u);
        const Decimal span = s.end - from;
        const Decimal steps = Decimal::from_int(s.duration);
        for (std::int64_t i = 1; i <= s.duration; ++i) {
          emit(from + span * Decimal::from_int(i) / steps);
        }
        break;
      }
      case SegmentKind::hold: {
        const Decimal level = s.value.value_or(u);
        for (std::int64_t i = 0; i < s.duration; ++i) emit(level);
        break;
      }
      case SegmentKind::step: {
        const Decimal level = clamp_unit(s.value ? *s.value : u + s.size);
        for (std::int64_t i = 0; i < s.duration; ++i) emit(level);
        break;
      }
      case SegmentKind::random_walk: {
        if (s.start) u = *s.start;
        for (std::int64_t i = 0; i < s.duration; ++i) emit(u + noise.uniform(s.volatility));
        break;
      }
    }
  }
  return out;
}

}  // namespace ratelab

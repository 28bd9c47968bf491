#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace ratelab {

/**
 * Signed fixed-point decimal with 18 fractional digits, stored as a 128-bit
 * integer scaled by 10^18 (the WAD convention of on-chain lending code).
 *
 * Every rounding step rounds half away from zero. Results that do not fit
 * the raw integer throw ArithmeticOverflow; nothing wraps silently.
 */
class Decimal {
 public:
  using rep = __int128;

  static constexpr int kDigits = 18;
  static constexpr rep kScale = 1'000'000'000'000'000'000;

  constexpr Decimal() = default;

  static constexpr Decimal from_raw(rep raw) {
    Decimal d;
    d.raw_ = raw;
    return d;
  }
  static Decimal from_int(std::int64_t value);

  // Accepts "[-|+]digits[.digits]" with at most 18 fractional digits.
  static Decimal parse(std::string_view text);

  static constexpr Decimal zero() { return from_raw(0); }
  static constexpr Decimal one() { return from_raw(kScale); }

  constexpr rep raw() const { return raw_; }

  // Canonical form: optional '-', integer part, '.', exactly 18 digits.
  std::string to_string() const;

  // Lossy; for plotting and human-readable reports only.
  double to_double() const;

  bool is_integer() const { return raw_ % kScale == 0; }

  friend constexpr bool operator==(Decimal, Decimal) = default;
  friend constexpr std::strong_ordering operator<=>(Decimal a, Decimal b) {
    return a.raw_ <=> b.raw_;
  }

  friend Decimal operator+(Decimal a, Decimal b);
  friend Decimal operator-(Decimal a, Decimal b);
  friend Decimal operator-(Decimal a);
  friend Decimal operator*(Decimal a, Decimal b);
  friend Decimal operator/(Decimal a, Decimal b);

  Decimal& operator+=(Decimal o) { return *this = *this + o; }
  Decimal& operator-=(Decimal o) { return *this = *this - o; }
  Decimal& operator*=(Decimal o) { return *this = *this * o; }
  Decimal& operator/=(Decimal o) { return *this = *this / o; }

 private:
  rep raw_ = 0;
};

Decimal mul(Decimal a, Decimal b);
Decimal div(Decimal a, Decimal b);

Decimal abs(Decimal a);

// Natural log, x > 0.
Decimal ln(Decimal x);

// e^y. Results below half an ulp round to zero; results beyond the raw
// range throw ArithmeticOverflow.
Decimal exp(Decimal y);

// base^exponent for base in [0, 1] and exponent > 0, via exp(exponent *
// ln(base)). pow(0, n) is 0. Integer exponents use exact repeated squaring.
Decimal pow(Decimal base, Decimal exponent);

inline Decimal to_decimal(Decimal d) { return d; }

inline namespace literals {
// 0.5_d style literals for tests and constants. Parses at runtime.
inline Decimal operator""_d(const char* text) { return Decimal::parse(text); }
}  // namespace literals

}  // namespace ratelab

#pragma once

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <compare>
#include <cstdint>
#include <string>

#include "ratelab/decimal.hpp"

namespace ratelab {

/**
 * High-precision twin of Decimal: a 50-significant-digit decimal float with
 * the same operator surface and the same domain rules for ln/exp/pow.
 * Nothing is rounded to 18 digits until to_decimal() is called.
 */
class ReferenceReal {
 public:
  using value_type = boost::multiprecision::number<boost::multiprecision::cpp_dec_float<50>,
                                                   boost::multiprecision::et_off>;

  ReferenceReal() = default;
  explicit ReferenceReal(Decimal d);
  explicit ReferenceReal(value_type v) : v_(std::move(v)) {}

  static ReferenceReal from_int(std::int64_t value);

  const value_type& value() const { return v_; }

  // Full-precision scientific form; for diagnostics.
  std::string to_string() const;

  friend bool operator==(const ReferenceReal& a, const ReferenceReal& b) { return a.v_ == b.v_; }
  friend std::partial_ordering operator<=>(const ReferenceReal& a, const ReferenceReal& b) {
    if (a.v_ < b.v_) return std::partial_ordering::less;
    if (a.v_ > b.v_) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
  }

  friend ReferenceReal operator+(const ReferenceReal& a, const ReferenceReal& b) {
    return ReferenceReal(value_type(a.v_ + b.v_));
  }
  friend ReferenceReal operator-(const ReferenceReal& a, const ReferenceReal& b) {
    return ReferenceReal(value_type(a.v_ - b.v_));
  }
  friend ReferenceReal operator-(const ReferenceReal& a) { return ReferenceReal(value_type(-a.v_)); }
  friend ReferenceReal operator*(const ReferenceReal& a, const ReferenceReal& b) {
    return ReferenceReal(value_type(a.v_ * b.v_));
  }
  friend ReferenceReal operator/(const ReferenceReal& a, const ReferenceReal& b);

  ReferenceReal& operator+=(const ReferenceReal& o) { return *this = *this + o; }
  ReferenceReal& operator-=(const ReferenceReal& o) { return *this = *this - o; }

 private:
  value_type v_{0};
};

// Round half away from zero to 18 fractional digits.
Decimal to_decimal(const ReferenceReal& x);

ReferenceReal abs(const ReferenceReal& x);
ReferenceReal ln(const ReferenceReal& x);
ReferenceReal exp(const ReferenceReal& y);
ReferenceReal pow(const ReferenceReal& base, const ReferenceReal& exponent);

}  // namespace ratelab

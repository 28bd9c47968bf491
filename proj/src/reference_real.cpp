#include "ratelab/reference_real.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <iomanip>
#include <sstream>

#include "ratelab/errors.hpp"

namespace ratelab {

namespace {

using value_type = ReferenceReal::value_type;
using boost::multiprecision::cpp_int;

const value_type& scale() {
  static const value_type s("1e18");
  return s;
}

cpp_int to_cpp_int(Decimal::rep raw) {
  return cpp_int(raw);
}

}  // namespace

ReferenceReal::ReferenceReal(Decimal d) : v_(value_type(to_cpp_int(d.raw())) / scale()) {}

ReferenceReal ReferenceReal::from_int(std::int64_t value) { return ReferenceReal(value_type(value)); }

std::string ReferenceReal::to_string() const {
  std::ostringstream os;
  os << std::setprecision(50) << v_;
  return os.str();
}

ReferenceReal operator/(const ReferenceReal& a, const ReferenceReal& b) {
  if (b.v_ == 0) throw DivisionByZero("division by zero");
  return ReferenceReal(value_type(a.v_ / b.v_));
}

Decimal to_decimal(const ReferenceReal& x) {
  value_type scaled = boost::multiprecision::round(x.value() * scale());
  cpp_int raw = scaled.convert_to<cpp_int>();
  static const cpp_int max = (cpp_int(1) << 127) - 1;
  if (raw > max || raw < -max - 1) {
    throw ArithmeticOverflow("reference value out of fixed-point range");
  }
  return Decimal::from_raw(static_cast<Decimal::rep>(raw));
}

ReferenceReal abs(const ReferenceReal& x) {
  return ReferenceReal(value_type(boost::multiprecision::abs(x.value())));
}

ReferenceReal ln(const ReferenceReal& x) {
  if (x.value() <= 0) throw DomainError("ln of non-positive value " + x.to_string());
  return ReferenceReal(value_type(boost::multiprecision::log(x.value())));
}

ReferenceReal exp(const ReferenceReal& y) {
  return ReferenceReal(value_type(boost::multiprecision::exp(y.value())));
}

ReferenceReal pow(const ReferenceReal& base, const ReferenceReal& exponent) {
  if (exponent.value() <= 0) {
    throw DomainError("pow exponent must be positive, got " + exponent.to_string());
  }
  if (base.value() < 0 || base.value() > 1) {
    throw DomainError("pow base must lie in [0, 1], got " + base.to_string());
  }
  if (base.value() == 0) return ReferenceReal{};
  return ReferenceReal(value_type(boost::multiprecision::pow(base.value(), exponent.value())));
}

}  // namespace ratelab

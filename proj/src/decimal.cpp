#include "ratelab/decimal.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>

#include "ratelab/errors.hpp"

namespace ratelab {

namespace {

using rep = Decimal::rep;
using urep = unsigned __int128;
using wide = boost::multiprecision::int256_t;

constexpr rep kScale = Decimal::kScale;
constexpr rep kMax = static_cast<rep>(~urep{0} >> 1);
constexpr rep kMin = -kMax - 1;

// ln(2) scaled by 10^36 and 10^18, and sqrt(2) scaled by 10^18.
constexpr rep kLn2Wide =
    static_cast<rep>(693147180559945309ULL) * static_cast<rep>(1'000'000'000'000'000'000ULL) +
    static_cast<rep>(417232121458176568ULL);
constexpr rep kLn2 = 693147180559945309;

// ln and exp carry nine guard digits (scale 10^27) and round once at the end.
constexpr rep kGuard = 1'000'000'000;
constexpr rep kFine = kScale * kGuard;
constexpr rep kLn2Fine = kLn2Wide / kGuard;  // truncation error < 1e-27
constexpr rep kSqrt2Fine =
    static_cast<rep>(1414213562373095048ULL) * kGuard + static_cast<rep>(801688724ULL);

// e^y underflows below half an ulp for y < -41.4465; overflow starts near 46.58.
constexpr rep kExpUnderflow = -42 * kScale;
constexpr rep kExpOverflow = 47 * kScale;

[[noreturn]] void overflow(const char* op) {
  throw ArithmeticOverflow(std::string("arithmetic overflow in ") + op);
}

template <class Int>
Int div_round(const Int& n, const Int& d) {
  Int q = n / d;
  Int r = n % d;
  if (r != 0) {
    Int ar = r < 0 ? Int(-r) : r;
    Int ad = d < 0 ? Int(-d) : d;
    if (ar >= ad - ar) {
      q += ((n < 0) != (d < 0)) ? Int(-1) : Int(1);
    }
  }
  return q;
}

rep narrow(const wide& w, const char* op) {
  if (w > wide(kMax) || w < wide(kMin)) overflow(op);
  return static_cast<rep>(w);
}

// (a * b) / d rounded half away from zero, widening to 256 bits when the
// product does not fit.
rep mul_div(rep a, rep b, rep d, const char* op) {
  rep product;
  if (!__builtin_mul_overflow(a, b, &product)) return div_round(product, d);
  return narrow(div_round(wide(a) * wide(b), wide(d)), op);
}

rep checked_mul(rep a, rep b, const char* op) {
  rep out;
  if (__builtin_mul_overflow(a, b, &out)) overflow(op);
  return out;
}

rep checked_add(rep a, rep b, const char* op) {
  rep out;
  if (__builtin_add_overflow(a, b, &out)) overflow(op);
  return out;
}

// ln(m) for m in [1/sqrt2, sqrt2] via the atanh series, all at scale 10^27.
rep ln_reduced(rep m) {
  rep s = mul_div(m - kFine, kFine, m + kFine, "ln");
  rep s2 = mul_div(s, s, kFine, "ln");
  rep term = s;
  rep sum = s;
  for (rep k = 3; term != 0; k += 2) {
    term = mul_div(term, s2, kFine, "ln");
    sum += div_round(term, k);
  }
  return 2 * sum;
}

// v * 10^9 / 2^k at scale 10^27.
rep fine_mantissa(rep v, int k) {
  if (k >= 0) return narrow(div_round(wide(v) * kGuard, wide(1) << k), "ln");
  return narrow((wide(v) * kGuard) << -k, "ln");
}

}  // namespace

Decimal Decimal::from_int(std::int64_t value) {
  return from_raw(static_cast<rep>(value) * kScale);
}

Decimal Decimal::parse(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  auto dot = s.find('.');
  std::string_view whole = s.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (whole.empty() || (dot != std::string_view::npos && frac.empty())) {
    throw ParseError("malformed decimal '" + std::string(text) + "'");
  }
  if (frac.size() > static_cast<std::size_t>(kDigits)) {
    throw ParseError("more than 18 fractional digits in '" + std::string(text) + "'");
  }
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!std::all_of(whole.begin(), whole.end(), is_digit) ||
      !std::all_of(frac.begin(), frac.end(), is_digit)) {
    throw ParseError("malformed decimal '" + std::string(text) + "'");
  }

  rep value = 0;
  auto push = [&](char c) {
    rep digit = c - '0';
    if (__builtin_mul_overflow(value, static_cast<rep>(10), &value) ||
        __builtin_add_overflow(value, negative ? -digit : digit, &value)) {
      throw ArithmeticOverflow("decimal '" + std::string(text) + "' out of range");
    }
  };
  for (char c : whole) push(c);
  for (char c : frac) push(c);
  for (std::size_t i = frac.size(); i < static_cast<std::size_t>(kDigits); ++i) push('0');
  return from_raw(value);
}

std::string Decimal::to_string() const {
  urep mag = raw_ < 0 ? urep(0) - static_cast<urep>(raw_) : static_cast<urep>(raw_);
  std::string digits;
  do {
    digits.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
    mag /= 10;
  } while (mag != 0);
  while (digits.size() <= static_cast<std::size_t>(kDigits)) digits.push_back('0');
  std::reverse(digits.begin(), digits.end());
  std::string out;
  if (raw_ < 0) out.push_back('-');
  out.append(digits, 0, digits.size() - kDigits);
  out.push_back('.');
  out.append(digits, digits.size() - kDigits, kDigits);
  return out;
}

double Decimal::to_double() const {
  rep whole = raw_ / kScale;
  rep frac = raw_ % kScale;
  return static_cast<double>(whole) + static_cast<double>(frac) / 1e18;
}

Decimal operator+(Decimal a, Decimal b) {
  return Decimal::from_raw(checked_add(a.raw_, b.raw_, "add"));
}

Decimal operator-(Decimal a, Decimal b) {
  rep out;
  if (__builtin_sub_overflow(a.raw_, b.raw_, &out)) overflow("sub");
  return Decimal::from_raw(out);
}

Decimal operator-(Decimal a) {
  if (a.raw_ == kMin) overflow("negate");
  return Decimal::from_raw(-a.raw_);
}

Decimal operator*(Decimal a, Decimal b) {
  // Integer-valued operands (elapsed seconds) multiply exactly.
  if (b.raw_ % kScale == 0) return Decimal::from_raw(checked_mul(a.raw_, b.raw_ / kScale, "mul"));
  if (a.raw_ % kScale == 0) return Decimal::from_raw(checked_mul(b.raw_, a.raw_ / kScale, "mul"));
  return Decimal::from_raw(mul_div(a.raw_, b.raw_, kScale, "mul"));
}

Decimal operator/(Decimal a, Decimal b) {
  if (b.raw_ == 0) throw DivisionByZero("division by zero");
  return Decimal::from_raw(mul_div(a.raw_, kScale, b.raw_, "div"));
}

Decimal mul(Decimal a, Decimal b) { return a * b; }
Decimal div(Decimal a, Decimal b) { return a / b; }

Decimal abs(Decimal a) { return a.raw() < 0 ? -a : a; }

Decimal ln(Decimal x) {
  if (x.raw() <= 0) throw DomainError("ln of non-positive value " + x.to_string());
  rep v = x.raw();

  // Find k with v / 2^k in [1, 2) (scaled).
  int k = 0;
  if (v < kScale) {
    rep t = v;
    while (t < kScale) {
      t <<= 1;
      --k;
    }
  } else {
    rep t = v;
    while (t >= 2 * kScale) {
      t >>= 1;
      ++k;
    }
  }
  rep m = fine_mantissa(v, k);
  if (m > kSqrt2Fine) {
    ++k;
    m = fine_mantissa(v, k);
  }
  const rep fine = ln_reduced(m) + static_cast<rep>(k) * kLn2Fine;
  return Decimal::from_raw(div_round(fine, kGuard));
}

Decimal exp(Decimal y) {
  rep v = y.raw();
  if (v == 0) return Decimal::one();
  if (v < kExpUnderflow) return Decimal::zero();
  if (v > kExpOverflow) overflow("exp");

  const rep k = div_round(v, kLn2);
  const rep r = v * kGuard - div_round(k * kLn2Wide, kGuard);

  rep sum = kFine;
  rep term = kFine;
  for (rep i = 1; term != 0; ++i) {
    term = mul_div(term, r, kFine * i, "exp");
    sum += term;
  }
  if (k >= 0) return Decimal::from_raw(narrow(div_round(wide(sum) << static_cast<int>(k), wide(kGuard)), "exp"));
  return Decimal::from_raw(narrow(div_round(wide(sum), wide(kGuard) << static_cast<int>(-k)), "exp"));
}

Decimal pow(Decimal base, Decimal exponent) {
  if (exponent.raw() <= 0) {
    throw DomainError("pow exponent must be positive, got " + exponent.to_string());
  }
  if (base.raw() < 0 || base > Decimal::one()) {
    throw DomainError("pow base must lie in [0, 1], got " + base.to_string());
  }
  if (base.raw() == 0) return Decimal::zero();
  if (base == Decimal::one()) return Decimal::one();

  if (exponent.is_integer() && exponent.raw() / kScale <= 64) {
    auto e = static_cast<unsigned>(exponent.raw() / kScale);
    Decimal result = Decimal::one();
    Decimal square = base;
    while (e != 0) {
      if (e & 1U) result = result * square;
      e >>= 1;
      if (e != 0) square = square * square;
    }
    return result;
  }
  return exp(exponent * ln(base));
}

}  // namespace ratelab

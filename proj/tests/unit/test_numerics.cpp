#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <random>

#include "ratelab/decimal.hpp"
#include "ratelab/errors.hpp"
#include "ratelab/reference_real.hpp"
#include "support.hpp"

using namespace ratelab;
using testing::d;
using testing::relative_gap;
using testing::uniform;
using boost::multiprecision::cpp_int;

namespace {

// Exact oracles: the full product/quotient in arbitrary precision, then
// half-away-from-zero rounding to 18 digits.
cpp_int round_div(cpp_int num, cpp_int den) {
  const bool negative = (num < 0) != (den < 0);
  num = abs(num);
  den = abs(den);
  cpp_int q = num / den;
  if ((num % den) * 2 >= den) ++q;
  return negative ? cpp_int(-q) : q;
}

cpp_int big(Decimal x) {
  const auto r = x.raw();
  const bool neg = r < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(r) : static_cast<unsigned __int128>(r);
  cpp_int out = static_cast<std::uint64_t>(u >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(u);
  return neg ? cpp_int(-out) : out;
}

cpp_int oracle_mul(Decimal a, Decimal b) { return round_div(big(a) * big(b), cpp_int("1000000000000000000")); }
cpp_int oracle_div(Decimal a, Decimal b) { return round_div(big(a) * cpp_int("1000000000000000000"), big(b)); }

// Random value with a random decimal magnitude between 1e-18 and 1e9.
Decimal random_magnitude(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> digits(1, 27);
  const int n = digits(rng);
  Decimal::rep limit = 1;
  for (int i = 0; i < n; ++i) limit *= 10;
  unsigned __int128 x = (static_cast<unsigned __int128>(rng()) << 64) | rng();
  Decimal::rep raw = static_cast<Decimal::rep>(x % static_cast<unsigned __int128>(limit));
  return Decimal::from_raw(rng() & 1 ? -raw : raw);
}

}  // namespace

TEST_CASE("mul examples") {
  CHECK(d("1.0") * d("1.0") == d("1.0"));
  CHECK(d("0.5") * d("0.5") == d("0.25"));
  CHECK(d("1.1") * d("0.05") == d("0.055"));
  CHECK(mul(d("-2"), d("0.25")) == d("-0.5"));
}

TEST_CASE("mul and div round half away from zero") {
  const Decimal tiny = Decimal::from_raw(1);
  CHECK((tiny * d("0.5")).raw() == 1);
  CHECK((-tiny * d("0.5")).raw() == -1);
  CHECK((tiny * d("0.49")).raw() == 0);
  CHECK(d("2") / d("3") == d("0.666666666666666667"));
  CHECK(d("-2") / d("3") == d("-0.666666666666666667"));
}

TEST_CASE("div examples") {
  CHECK(d("1.0") / d("2.0") == d("0.5"));
  CHECK(d("0.3") / d("0.5") == d("0.6"));
  for (const char* x : {"0.000000000000000001", "-3.5", "12345.678", "0.999999999999999999"}) {
    CHECK(div(d(x), d(x)) == Decimal::one());
  }
  CHECK_THROWS_AS(d("1") / Decimal::zero(), DivisionByZero);
}

TEST_CASE("overflow is reported, never wrapped") {
  const Decimal huge = Decimal::from_raw(std::numeric_limits<Decimal::rep>::max());
  CHECK_THROWS_AS(huge + Decimal::one(), ArithmeticOverflow);
  CHECK_THROWS_AS(-huge - d("2"), ArithmeticOverflow);
  CHECK_THROWS_AS(d("100000000000") * d("100000000000000"), ArithmeticOverflow);
  CHECK_THROWS_AS(d("1000000000000000") / d("0.000001"), ArithmeticOverflow);
  CHECK_THROWS_AS(exp(d("100")), ArithmeticOverflow);
}

TEST_CASE("canonical string form") {
  CHECK(d("0.5").to_string() == "0.500000000000000000");
  CHECK(d("-1.25").to_string() == "-1.250000000000000000");
  CHECK(d("+7").to_string() == "7.000000000000000000");
  CHECK(Decimal::zero().to_string() == "0.000000000000000000");
  CHECK(Decimal::from_raw(-1).to_string() == "-0.000000000000000001");
  for (const char* bad : {"", "-", ".", "1.", ".5", "1.2.3", "0x10", "1e5", " 1", "1.0000000000000000001", "abc"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(Decimal::parse(bad), ParseError);
  }
}

TEST_CASE("string round trip is lossless") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100000; ++i) {
    unsigned __int128 x = (static_cast<unsigned __int128>(rng()) << 64) | rng();
    const Decimal v = Decimal::from_raw(static_cast<Decimal::rep>(x));
    REQUIRE(Decimal::parse(v.to_string()) == v);
  }
}

TEST_CASE("mul and div match an exact big-integer oracle") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100000; ++i) {
    const Decimal a = random_magnitude(rng);
    const Decimal b = random_magnitude(rng);
    CAPTURE(a);
    CAPTURE(b);
    REQUIRE(big(a * b) == oracle_mul(a, b));
    if (b != Decimal::zero()) {
      try {
        const Decimal q = a / b;
        REQUIRE(big(q) == oracle_div(a, b));
      } catch (const ArithmeticOverflow&) {
        REQUIRE(abs(oracle_div(a, b)) > big(Decimal::from_raw(std::numeric_limits<Decimal::rep>::max())));
      }
    }
  }
}

TEST_CASE("reference twin agrees with mul within one ulp") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100000; ++i) {
    const Decimal a = random_magnitude(rng);
    const Decimal b = random_magnitude(rng);
    const Decimal twin = to_decimal(ReferenceReal(a) * ReferenceReal(b));
    REQUIRE(abs(twin - a * b).raw() <= 1);
  }
}

TEST_CASE("reference twin examples") {
  CHECK(to_decimal(pow(ReferenceReal(d("0.5")), ReferenceReal(d("1.0")))) == d("0.5"));
  CHECK(to_decimal(ReferenceReal(d("1.0")) / ReferenceReal(d("3.0"))) == d("0.333333333333333333"));
  CHECK(div(d("1.0"), d("3.0")) == d("0.333333333333333333"));
  CHECK_THROWS_AS(ReferenceReal(d("1")) / ReferenceReal(), DivisionByZero);
  CHECK_THROWS_AS(pow(ReferenceReal(d("1.5")), ReferenceReal(d("2"))), DomainError);
}

TEST_CASE("mul commutes and div undoes mul") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100000; ++i) {
    const Decimal a = random_magnitude(rng);
    const Decimal b = random_magnitude(rng);
    REQUIRE(a * b == b * a);
    if (abs(b) >= Decimal::one()) {
      REQUIRE(abs(div(mul(a, b), b) - a).raw() <= 1);
    } else if (b != Decimal::zero()) {
      // Below one the product's half-ulp rounding is magnified by 1/|b|.
      const double bound = 0.5 / std::abs(b.to_double()) + 1.0;
      REQUIRE(static_cast<double>(abs(div(mul(a, b), b) - a).raw()) <= bound);
    }
  }
}

TEST_CASE("ln and exp reference values") {
  CHECK(ln(Decimal::one()) == Decimal::zero());
  CHECK(ln(d("2")) == d("0.693147180559945309"));
  CHECK(exp(Decimal::one()) == d("2.718281828459045235"));
  CHECK(exp(Decimal::zero()) == Decimal::one());
  CHECK(exp(d("-50")) == Decimal::zero());
  CHECK_THROWS_AS(ln(Decimal::zero()), DomainError);
  CHECK_THROWS_AS(ln(d("-1")), DomainError);
}

TEST_CASE("pow examples") {
  CHECK(pow(d("1.0"), d("3.5")) == d("1.0"));
  CHECK(pow(d("0.0"), d("2.0")) == d("0.0"));
  CHECK(pow(d("0.5"), d("2.0")) == d("0.25"));
  const ReferenceReal ref = pow(ReferenceReal(d("0.8")), ReferenceReal(d("3.5")));
  CHECK(relative_gap(pow(d("0.8"), d("3.5")), ref) <= 1e-9);
  CHECK_THROWS_AS(pow(d("1.01"), d("2")), DomainError);
  CHECK_THROWS_AS(pow(d("-0.1"), d("2")), DomainError);
  CHECK_THROWS_AS(pow(d("0.5"), d("0")), DomainError);
  CHECK_THROWS_AS(pow(d("0.5"), d("-1")), DomainError);
}

TEST_CASE("pow relative error within 1e-9 where the result is resolvable") {
  // 18 fractional digits cannot carry 1e-9 relative accuracy below about
  // 1e-9 absolute, so exponents are drawn to keep the result above 1e-8.
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> decade(0, 5);
  double worst = 0;
  for (int i = 0; i < 20000; ++i) {
    Decimal top = Decimal::one();
    for (int k = decade(rng); k > 0; --k) top = top / d("10");
    const Decimal base = uniform(rng, top / d("10"), top);
    const double limit = base == Decimal::one() ? 10.0
                                                : std::min(10.0, std::log(1e-8) / std::log(base.to_double()));
    const Decimal max_exp = Decimal::from_raw(static_cast<Decimal::rep>(limit * 1e15) * 1000);
    const Decimal exponent = uniform(rng, Decimal::from_raw(1000), max_exp);
    const double gap = relative_gap(pow(base, exponent), pow(ReferenceReal(base), ReferenceReal(exponent)));
    worst = std::max(worst, gap);
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("pow is nondecreasing in base") {
  for (const char* exponent : {"0.3", "1", "2.5", "4.9", "5.5", "11"}) {
    Decimal prev = Decimal::zero();
    for (int i = 0; i <= 10000; ++i) {
      const Decimal base = Decimal::from_int(i) / Decimal::from_int(10000);
      const Decimal v = pow(base, d(exponent));
      REQUIRE(prev <= v);
      prev = v;
    }
  }
}

TEST_CASE("fixed point agrees with the reference backend on every operation") {
  std::mt19937_64 rng(6);
  const Decimal hi = d("1000");
  double worst = 0;
  auto track = [&](Decimal fp, const ReferenceReal& ref) { worst = std::max(worst, relative_gap(fp, ref)); };
  for (int i = 0; i < 100000; ++i) {
    const Decimal a = uniform(rng, -hi, hi);
    const Decimal b = uniform(rng, -hi, hi);
    const ReferenceReal ra(a), rb(b);
    track(a + b, ra + rb);
    track(a - b, ra - rb);
    track(a * b, ra * rb);
    if (b != Decimal::zero()) track(a / b, ra / rb);
    const Decimal x = uniform(rng, Decimal::from_raw(1), d("100"));
    track(ln(x), ln(ReferenceReal(x)));
    const Decimal y = uniform(rng, d("-40"), d("40"));
    track(exp(y), exp(ReferenceReal(y)));
    const Decimal base = uniform(rng, Decimal::zero(), Decimal::one());
    const Decimal e = uniform(rng, Decimal::from_raw(1), d("10"));
    track(pow(base, e), pow(ReferenceReal(base), ReferenceReal(e)));
  }
  CHECK(worst <= 1e-6);
}

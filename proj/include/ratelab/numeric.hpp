#pragma once

#include <concepts>
#include <cstdint>

#include "ratelab/decimal.hpp"
#include "ratelab/reference_real.hpp"

namespace ratelab {

using Timestamp = std::int64_t;

// The arithmetic surface the models are written against. Decimal is the
// production backend; ReferenceReal is its high-precision twin.
template <class T>
concept Numeric = std::regular<T> && requires(const T a, const T b, Decimal d, std::int64_t i) {
  { a + b } -> std::convertible_to<T>;
  { a - b } -> std::convertible_to<T>;
  { a * b } -> std::convertible_to<T>;
  { a / b } -> std::convertible_to<T>;
  { -a } -> std::convertible_to<T>;
  { a < b } -> std::convertible_to<bool>;
  { T(d) };
  { T::from_int(i) } -> std::same_as<T>;
  { to_decimal(a) } -> std::same_as<Decimal>;
  { ln(a) } -> std::same_as<T>;
  { exp(a) } -> std::same_as<T>;
  { pow(a, b) } -> std::same_as<T>;
};

enum class Backend { fixed, reference };

}  // namespace ratelab

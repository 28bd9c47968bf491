#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

#include "doctest.h"
#include "ratelab/decimal.hpp"
#include "ratelab/reference_real.hpp"

namespace doctest {
template <>
struct StringMaker<ratelab::Decimal> {
  static String convert(const ratelab::Decimal& d) { return d.to_string().c_str(); }
};
template <>
struct StringMaker<ratelab::ReferenceReal> {
  static String convert(const ratelab::ReferenceReal& r) { return r.to_string().c_str(); }
};
}  // namespace doctest

namespace testing {

using ratelab::Decimal;

inline Decimal d(const char* text) { return Decimal::parse(text); }

inline std::filesystem::path source_dir() { return RATELAB_SOURCE_DIR; }

// Fresh scratch directory per call, removed by the owner.
class ScratchDir {
 public:
  ScratchDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("ratelab_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Uniform Decimal on [lo, hi] at full 18-digit resolution.
inline Decimal uniform(std::mt19937_64& rng, Decimal lo, Decimal hi) {
  const auto span = static_cast<unsigned __int128>(hi.raw() - lo.raw());
  unsigned __int128 x = (static_cast<unsigned __int128>(rng()) << 64) | rng();
  return Decimal::from_raw(lo.raw() + static_cast<Decimal::rep>(x % (span + 1)));
}

// |actual - reference| / max(|reference|, 1e-9), evaluated at 50 digits.
inline double relative_gap(Decimal actual, const ratelab::ReferenceReal& reference) {
  using V = ratelab::ReferenceReal::value_type;
  const V ref = reference.value();
  const V diff = abs(ratelab::ReferenceReal(actual).value() - ref);
  const V denom = std::max(V(abs(ref)), V("1e-9"));
  return static_cast<double>(V(diff / denom));
}

}  // namespace testing

#include "ratelab/snapshot.hpp"

#include <charconv>

#include "ratelab/errors.hpp"

namespace ratelab {

const std::string& snapshot_value(const Snapshot& record, const std::string& key) {
  for (const auto& [k, v] : record) {
    if (k == key) return v;
  }
  throw ParseError("snapshot is missing key '" + key + "'");
}

Decimal snapshot_decimal(const Snapshot& record, const std::string& key) {
  return Decimal::parse(snapshot_value(record, key));
}

std::int64_t snapshot_int(const Snapshot& record, const std::string& key) {
  const std::string& text = snapshot_value(record, key);
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("snapshot key '" + key + "' is not an integer: " + text);
  }
  return out;
}

}  // namespace ratelab

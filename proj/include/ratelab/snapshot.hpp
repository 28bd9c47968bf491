#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ratelab/decimal.hpp"

namespace ratelab {

// Flat key/value record of a model's mutable state; values are canonical
// decimal strings or integers.
using Snapshot = std::vector<std::pair<std::string, std::string>>;

// Throws ParseError when the key is missing.
const std::string& snapshot_value(const Snapshot& record, const std::string& key);
Decimal snapshot_decimal(const Snapshot& record, const std::string& key);
std::int64_t snapshot_int(const Snapshot& record, const std::string& key);

}  // namespace ratelab

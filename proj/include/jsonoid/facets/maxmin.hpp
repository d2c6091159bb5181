#pragma once

#include <stdexcept>

#include "jsonoid/json.hpp"

namespace jsonoid {

enum class MaxMinContext { NumberValue, StringLength, ArrayLength };

// Running minimum and maximum over numeric observations. Bounds are kept as
// JSON numbers so integer-valued inputs round-trip exactly into the emitted
// schema.
struct MaxMinFacet {
  MaxMinContext context = MaxMinContext::NumberValue;
  Json min;
  Json max;

  static MaxMinFacet of(MaxMinContext ctx, Json value) {
    return MaxMinFacet{ctx, value, value};
  }

  friend MaxMinFacet combine(MaxMinFacet a, const MaxMinFacet& b) {
    if (a.context != b.context) throw std::invalid_argument("maxmin: context mismatch");
    if (compare_numbers(b.min, a.min) < 0) a.min = b.min;
    if (compare_numbers(b.max, a.max) > 0) a.max = b.max;
    return a;
  }

  bool contains(const Json& value) const {
    return compare_numbers(value, min) >= 0 && compare_numbers(value, max) <= 0;
  }

  bool operator==(const MaxMinFacet&) const = default;
};

}  // namespace jsonoid

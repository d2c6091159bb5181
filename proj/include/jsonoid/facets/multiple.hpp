#pragma once

#include <cstdint>
#include <numeric>
#include <optional>

#include "jsonoid/json.hpp"

namespace jsonoid {

// Greatest common divisor of all observed integer magnitudes. gcd = 0 is
// the uninitialized identity. A multipleOf keyword is only worth emitting
// when the final gcd exceeds 1.
struct MultipleFacet {
  std::uint64_t gcd = 0;

  // Returns nullopt for values outside the Euclid-friendly domain
  // (non-integral, or magnitude not representable in 64 bits); such a value
  // disables the facet for its node.
  static std::optional<MultipleFacet> of(const Json& value) {
    if (!is_integral_number(value)) return std::nullopt;
    std::uint64_t mag;
    if (value.is_number_unsigned()) {
      mag = value.get<std::uint64_t>();
    } else if (value.is_number_integer()) {
      auto v = value.get<std::int64_t>();
      mag = v < 0 ? ~std::uint64_t(v) + 1 : std::uint64_t(v);
    } else {
      double d = value.get<double>();
      if (std::abs(d) >= 9.007199254740992e15) return std::nullopt;
      auto v = static_cast<std::int64_t>(d);
      mag = v < 0 ? ~std::uint64_t(v) + 1 : std::uint64_t(v);
    }
    return MultipleFacet{mag};
  }

  friend MultipleFacet combine(MultipleFacet a, const MultipleFacet& b) {
    a.gcd = std::gcd(a.gcd, b.gcd);
    return a;
  }

  bool emits() const { return gcd > 1; }

  bool operator==(const MultipleFacet&) const = default;
};

}  // namespace jsonoid

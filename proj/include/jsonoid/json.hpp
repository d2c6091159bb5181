#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

namespace jsonoid {

// Documents and emitted schemas preserve key insertion order.
using Json = nlohmann::ordered_json;

// True for integer-typed numbers and for doubles with no fractional part.
inline bool is_integral_number(const Json& v) {
  if (v.is_number_integer()) return true;  // covers unsigned as well
  if (!v.is_number_float()) return false;
  double d = v.get<double>();
  return std::isfinite(d) && std::trunc(d) == d;
}

// Canonical JSON bytes: object keys sorted recursively, compact separators.
// Used for element equality (uniqueItems) wherever a byte-level notion of
// value identity is needed.
inline std::string canonical_bytes(const Json& v) {
  return nlohmann::json(v).dump();
}

// Canonical textual form of a JSON number: integers in decimal, doubles as
// the shortest round-trip representation. 10 and 10.0 map to the same text.
inline std::string canonical_number_text(const Json& v) {
  char buf[40];
  if (v.is_number_unsigned()) {
    auto r = std::to_chars(buf, buf + sizeof buf, v.get<std::uint64_t>());
    return std::string(buf, r.ptr);
  }
  if (v.is_number_integer()) {
    auto r = std::to_chars(buf, buf + sizeof buf, v.get<std::int64_t>());
    return std::string(buf, r.ptr);
  }
  double d = v.get<double>();
  if (d == 0.0) d = 0.0;  // collapse -0.0
  if (std::isfinite(d) && std::trunc(d) == d && std::abs(d) < 9.007199254740992e15) {
    auto r = std::to_chars(buf, buf + sizeof buf, static_cast<std::int64_t>(d));
    return std::string(buf, r.ptr);
  }
  auto r = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, r.ptr);
}

// Integral doubles in int64 range collapse to the integer representation,
// so emitted bounds do not depend on whether 1 or 1.0 was observed first.
inline Json normalize_number(const Json& v) {
  if (!v.is_number_float()) return v;
  double d = v.get<double>();
  if (std::isfinite(d) && std::trunc(d) == d && std::abs(d) < 9.007199254740992e15)
    return Json(static_cast<std::int64_t>(d));
  return v;
}

// Number of Unicode scalar values in a UTF-8 string (continuation bytes
// are not counted). Input comes from a JSON parser, so it is valid UTF-8.
inline std::uint64_t utf8_length(std::string_view s) {
  std::uint64_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

// Exact three-way comparison of two JSON numbers across the integer/double
// representations. Avoids the precision loss of converting large integers
// to double.
inline int compare_numbers(const Json& a, const Json& b) {
  auto cmp_ll = [](std::int64_t x, std::int64_t y) { return x < y ? -1 : (x > y ? 1 : 0); };
  auto cmp_ull = [](std::uint64_t x, std::uint64_t y) { return x < y ? -1 : (x > y ? 1 : 0); };

  // int64 vs double, exact
  auto cmp_int_dbl = [](std::int64_t i, double d) -> int {
    if (std::isnan(d)) return 0;  // not produced by JSON parsing
    if (d == HUGE_VAL) return -1;
    if (d == -HUGE_VAL) return 1;
    if (d >= 9.223372036854775808e18) return -1;   // > int64 max
    if (d < -9.223372036854775808e18) return 1;    // < int64 min
    double fl = std::floor(d);
    auto f = static_cast<std::int64_t>(fl);
    if (i < f) return -1;
    if (i > f) return 1;
    return d > fl ? -1 : 0;  // equal integer part; fraction breaks the tie
  };
  auto cmp_uint_dbl = [](std::uint64_t u, double d) -> int {
    if (d < 0.0) return 1;
    if (d >= 1.8446744073709551616e19) return -1;  // > uint64 max
    double fl = std::floor(d);
    auto f = static_cast<std::uint64_t>(fl);
    if (u < f) return -1;
    if (u > f) return 1;
    return d > fl ? -1 : 0;
  };

  bool ai = a.is_number_integer() && !a.is_number_unsigned();
  bool au = a.is_number_unsigned();
  bool bi = b.is_number_integer() && !b.is_number_unsigned();
  bool bu = b.is_number_unsigned();

  if (ai && bi) return cmp_ll(a.get<std::int64_t>(), b.get<std::int64_t>());
  if (au && bu) return cmp_ull(a.get<std::uint64_t>(), b.get<std::uint64_t>());
  if (ai && bu) {
    auto x = a.get<std::int64_t>();
    if (x < 0) return -1;
    return cmp_ull(static_cast<std::uint64_t>(x), b.get<std::uint64_t>());
  }
  if (au && bi) return -compare_numbers(b, a);
  if (ai) return cmp_int_dbl(a.get<std::int64_t>(), b.get<double>());
  if (au) return cmp_uint_dbl(a.get<std::uint64_t>(), b.get<double>());
  if (bi || bu) return -compare_numbers(b, a);
  double x = a.get<double>(), y = b.get<double>();
  return x < y ? -1 : (x > y ? 1 : 0);
}

// RFC 6901 token escaping for JSON pointer fragments.
inline std::string pointer_escape(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (char c : token) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

}  // namespace jsonoid

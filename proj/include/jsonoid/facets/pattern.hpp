#pragma once

#include <algorithm>
#include <string>
#include <string_view>

namespace jsonoid {

// Longest common prefix and suffix of all observed strings.
struct PatternFacet {
  std::string prefix;
  std::string suffix;

  static PatternFacet of(std::string_view value) {
    return PatternFacet{std::string(value), std::string(value)};
  }

  friend PatternFacet combine(const PatternFacet& a, const PatternFacet& b) {
    auto is_continuation = [](char c) { return (static_cast<unsigned char>(c) & 0xC0) == 0x80; };
    // Bytewise scans, trimmed back to a UTF-8 scalar boundary so a common
    // fragment never ends (or starts) inside a multi-byte character.
    auto common_prefix = [&](std::string_view x, std::string_view y) {
      std::size_t n = std::min(x.size(), y.size());
      std::size_t i = 0;
      while (i < n && x[i] == y[i]) ++i;
      while (i > 0 && i < x.size() && is_continuation(x[i])) --i;
      return std::string(x.substr(0, i));
    };
    auto common_suffix = [&](std::string_view x, std::string_view y) {
      std::size_t n = std::min(x.size(), y.size());
      std::size_t i = 0;
      while (i < n && x[x.size() - 1 - i] == y[y.size() - 1 - i]) ++i;
      while (i > 0 && is_continuation(x[x.size() - i])) --i;
      return std::string(x.substr(x.size() - i));
    };
    return PatternFacet{common_prefix(a.prefix, b.prefix), common_suffix(a.suffix, b.suffix)};
  }

  bool operator==(const PatternFacet&) const = default;
};

// Escapes ECMAScript regex metacharacters in a literal fragment.
std::string regex_escape(std::string_view literal);

// Anchored regex for the parts of a PatternFacet meeting min_length, or an
// empty string when neither part qualifies. When both prefix and suffix
// qualify the prefix becomes a lookahead so that strings where the two
// overlap (e.g. a constant value equal to both) still match.
std::string pattern_regex(const PatternFacet& facet, std::size_t min_length);

}  // namespace jsonoid

#include "jsonoid/facets/pattern.hpp"

#include "jsonoid/json.hpp"

namespace jsonoid {

std::string regex_escape(std::string_view literal) {
  static constexpr std::string_view meta = R"(\^$.|?*+()[]{})";
  std::string out;
  out.reserve(literal.size());
  for (char c : literal) {
    if (meta.find(c) != std::string_view::npos) out += '\\';
    out += c;
  }
  return out;
}

std::string pattern_regex(const PatternFacet& facet, std::size_t min_length) {
  const bool use_prefix = !facet.prefix.empty() && utf8_length(facet.prefix) >= min_length;
  const bool use_suffix = !facet.suffix.empty() && utf8_length(facet.suffix) >= min_length;
  if (use_prefix && use_suffix) {
    // The prefix match is a lookahead so values where prefix and suffix
    // overlap (e.g. every observed string identical) still match.
    return "^(?=" + regex_escape(facet.prefix) + ")[\\s\\S]*" + regex_escape(facet.suffix) + "$";
  }
  if (use_prefix) return "^" + regex_escape(facet.prefix);
  if (use_suffix) return regex_escape(facet.suffix) + "$";
  return "";
}

}  // namespace jsonoid

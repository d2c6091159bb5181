#include "jsonoid/schema.hpp"

#include <algorithm>
#include <array>

namespace jsonoid {

std::string_view kind_name(Kind kind) {
  switch (kind) {
    case Kind::Object: return "object";
    case Kind::Array: return "array";
    case Kind::String: return "string";
    case Kind::Number: return "number";
    case Kind::Boolean: return "boolean";
    case Kind::Null: return "null";
    case Kind::Any: return "any";
    case Kind::Product: return "product";
  }
  return "?";
}

namespace {

constexpr std::array<std::pair<std::string_view, Facet>, 15> kFacetNames{{
    {"objecttypes", Facet::ObjectTypes},
    {"arraytype", Facet::ArrayType},
    {"maxmin", Facet::MaxMin},
    {"multiple", Facet::Multiple},
    {"pattern", Facet::Pattern},
    {"format", Facet::Format},
    {"examples", Facet::Examples},
    {"required", Facet::Required},
    {"dependencies", Facet::Dependencies},
    {"unique", Facet::Unique},
    {"attributecounts", Facet::AttributeCounts},
    {"bloom", Facet::Bloom},
    {"hll", Facet::Hll},
    {"histogram", Facet::Histogram},
    {"stats", Facet::Stats},
}};

}  // namespace

std::string_view facet_name(Facet facet) {
  for (const auto& [name, f] : kFacetNames)
    if (f == facet) return name;
  return "?";
}

std::optional<Facet> facet_from_name(std::string_view name) {
  for (const auto& [n, f] : kFacetNames)
    if (n == name) return f;
  return std::nullopt;
}

FacetSet FacetSet::parse(std::string_view spec) {
  if (spec == "min" || spec == "minimum") return minimum();
  if (spec == "simple") return simple();
  if (spec == "all") return all();
  FacetSet out;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t comma = spec.find(',', pos);
    std::string_view name = spec.substr(pos, comma == std::string_view::npos ? spec.size() - pos
                                                                             : comma - pos);
    if (!name.empty()) {
      auto f = facet_from_name(name);
      if (!f) throw std::invalid_argument("unknown facet name: " + std::string(name));
      out = out.with(*f);
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (out.bits() == 0) throw std::invalid_argument("empty facet list");
  return out;
}

std::vector<std::string> FacetSet::names() const {
  std::vector<std::string> out;
  for (const auto& [name, f] : kFacetNames)
    if (contains(f)) out.emplace_back(name);
  return out;
}

const SchemaNode* SchemaNode::find_property(std::string_view key) const {
  auto it = std::lower_bound(properties.begin(), properties.end(), key,
                             [](const auto& p, std::string_view k) { return p.first < k; });
  if (it == properties.end() || it->first != key) return nullptr;
  return &it->second;
}

std::set<std::string> SchemaNode::property_keys() const {
  std::set<std::string> keys;
  for (const auto& [k, _] : properties) keys.insert(k);
  return keys;
}

}  // namespace jsonoid

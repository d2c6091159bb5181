#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jsonoid/facets/examples.hpp"
#include "jsonoid/facets/format.hpp"
#include "jsonoid/facets/maxmin.hpp"
#include "jsonoid/facets/multiple.hpp"
#include "jsonoid/facets/pattern.hpp"
#include "jsonoid/facets/structural.hpp"
#include "jsonoid/json.hpp"
#include "jsonoid/pds/bloom_filter.hpp"
#include "jsonoid/pds/hyperloglog.hpp"
#include "jsonoid/pds/streaming_histogram.hpp"
#include "jsonoid/stats/moments.hpp"

namespace jsonoid {

enum class Kind { Object, Array, String, Number, Boolean, Null, Any, Product };

std::string_view kind_name(Kind kind);

// Deciding whether two schemas merge or become alternatives of a product:
// kind equivalence merges any two schemas of the same basic kind, label
// equivalence additionally requires objects to have identical key sets.
enum class Equivalence { Kind, Label };

enum class Facet : std::uint32_t {
  ObjectTypes     = 1u << 0,
  ArrayType       = 1u << 1,
  MaxMin          = 1u << 2,  // number value, string length, array length
  Multiple        = 1u << 3,
  Pattern         = 1u << 4,
  Format          = 1u << 5,
  Examples        = 1u << 6,
  Required        = 1u << 7,
  Dependencies    = 1u << 8,
  Unique          = 1u << 9,
  AttributeCounts = 1u << 10,
  Bloom           = 1u << 11,
  Hll             = 1u << 12,
  Histogram       = 1u << 13,
  Stats           = 1u << 14,
};

class FacetSet {
 public:
  constexpr FacetSet() = default;
  constexpr explicit FacetSet(std::uint32_t bits) : bits_(bits) {}

  static constexpr FacetSet minimum() {
    return FacetSet(std::uint32_t(Facet::ObjectTypes) | std::uint32_t(Facet::ArrayType));
  }
  static constexpr FacetSet simple() {
    return FacetSet(minimum().bits_ | std::uint32_t(Facet::MaxMin) |
                    std::uint32_t(Facet::Multiple) | std::uint32_t(Facet::Pattern) |
                    std::uint32_t(Facet::Format) | std::uint32_t(Facet::Examples) |
                    std::uint32_t(Facet::Required) | std::uint32_t(Facet::Dependencies) |
                    std::uint32_t(Facet::Unique));
  }
  static constexpr FacetSet all() {
    return FacetSet(simple().bits_ | std::uint32_t(Facet::AttributeCounts) |
                    std::uint32_t(Facet::Bloom) | std::uint32_t(Facet::Hll) |
                    std::uint32_t(Facet::Histogram) | std::uint32_t(Facet::Stats));
  }
  // Deterministic facets only: merge results are exactly order-independent.
  static constexpr FacetSet deterministic() {
    return FacetSet(all().bits_ & ~std::uint32_t(Facet::Examples) &
                    ~std::uint32_t(Facet::Histogram) & ~std::uint32_t(Facet::Stats));
  }

  // "min" | "simple" | "all" | comma-separated facet names
  static FacetSet parse(std::string_view spec);

  constexpr bool contains(Facet f) const { return (bits_ & std::uint32_t(f)) != 0; }
  constexpr FacetSet with(Facet f) const { return FacetSet(bits_ | std::uint32_t(f)); }
  constexpr FacetSet without(Facet f) const { return FacetSet(bits_ & ~std::uint32_t(f)); }
  constexpr std::uint32_t bits() const { return bits_; }
  std::vector<std::string> names() const;

  bool operator==(const FacetSet&) const = default;

 private:
  std::uint32_t bits_ = 0;
};

std::string_view facet_name(Facet facet);
std::optional<Facet> facet_from_name(std::string_view name);

inline constexpr std::size_t kMaxNestingDepth = 1000;

struct DiscoveryConfig {
  FacetSet facets = FacetSet::all();
  Equivalence equivalence = Equivalence::Kind;
  std::size_t reservoir_capacity = 100;
  std::size_t histogram_max_bins = 100;
  std::uint64_t bloom_bits = 65536;
  std::uint32_t bloom_hashes = 7;
  std::uint32_t hll_precision = 12;
  std::size_t pattern_min_length = 3;
  std::uint64_t rng_seed = 0;
};

// One node of the discovered schema tree: a basic kind plus the facets
// legal for that kind, or a product holding alternative schemas. Nodes are
// plain values; merging never mutates its inputs' observable state, so
// nodes can move freely between worker threads.
struct SchemaNode {
  Kind kind = Kind::Any;

  // object ------------------------------------------------------------
  // ObjectTypes: per-key child schemas, kept sorted by key.
  std::vector<std::pair<std::string, SchemaNode>> properties;
  std::optional<RequiredFacet> required;
  std::optional<AttributeCountsFacet> attribute_counts;
  std::optional<DependenciesFacet> dependencies;

  // array ---------------------------------------------------------------
  // ArrayType: tuple mode keeps one positional schema per element; list
  // mode keeps a single item schema (kind Any for arrays never observed
  // non-empty).
  bool tuple_mode = false;
  std::vector<SchemaNode> items;
  std::optional<MaxMinFacet> array_length;
  std::optional<UniqueFacet> unique;

  // string --------------------------------------------------------------
  std::optional<MaxMinFacet> string_length;
  std::optional<PatternFacet> pattern;
  std::optional<FormatFacet> format;

  // number --------------------------------------------------------------
  bool integral = true;  // true while every observed value was integral
  std::optional<MaxMinFacet> range;
  // Absent either when the facet is disabled or when a value outside the
  // integer domain was observed (absence absorbs on merge).
  std::optional<MultipleFacet> multiple;
  std::optional<StreamingHistogram> histogram;
  std::optional<MomentsAccumulator> moments;

  // string + number -------------------------------------------------------
  std::optional<ExamplesFacet> examples;
  std::optional<BloomFilter> bloom;
  std::optional<HyperLogLog> hll;

  // product ---------------------------------------------------------------
  std::vector<SchemaNode> branches;

  const SchemaNode* find_property(std::string_view key) const;
  std::set<std::string> property_keys() const;
};

}  // namespace jsonoid

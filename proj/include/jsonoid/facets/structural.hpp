#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "jsonoid/json.hpp"

namespace jsonoid {

// Keys present in every observed object (set intersection under merge).
// The identity is the "all keys" top element, so the first initialized
// facet seeds the intersection.
struct RequiredFacet {
  bool top = false;
  std::set<std::string> keys;

  static RequiredFacet identity() { return RequiredFacet{true, {}}; }

  static RequiredFacet of(const Json& obj) {
    RequiredFacet r;
    for (auto it = obj.begin(); it != obj.end(); ++it) r.keys.insert(it.key());
    return r;
  }

  friend RequiredFacet combine(const RequiredFacet& a, const RequiredFacet& b) {
    if (a.top) return b;
    if (b.top) return a;
    RequiredFacet r;
    for (const auto& k : a.keys)
      if (b.keys.count(k)) r.keys.insert(k);
    return r;
  }

  bool operator==(const RequiredFacet&) const = default;
};

// Occurrence count per attribute key plus the number of objects observed.
// Missing keys count as zero.
struct AttributeCountsFacet {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total_objects = 0;

  static AttributeCountsFacet of(const Json& obj) {
    AttributeCountsFacet c;
    c.total_objects = 1;
    for (auto it = obj.begin(); it != obj.end(); ++it) c.counts[it.key()] = 1;
    return c;
  }

  friend AttributeCountsFacet combine(AttributeCountsFacet a, const AttributeCountsFacet& b) {
    for (const auto& [k, n] : b.counts) a.counts[k] += n;
    a.total_objects += b.total_objects;
    return a;
  }

  bool operator==(const AttributeCountsFacet&) const = default;
};

// Co-occurrence counts for ordered key pairs within one object, with its
// own per-key occurrence counts. A dependency a -> b holds when every
// object containing a also contains b, i.e. pairs[(a,b)] == singles[a].
struct DependenciesFacet {
  std::map<std::pair<std::string, std::string>, std::uint64_t> pair_counts;
  AttributeCountsFacet singles;

  static DependenciesFacet of(const Json& obj) {
    DependenciesFacet d;
    d.singles = AttributeCountsFacet::of(obj);
    std::vector<std::string> keys;
    keys.reserve(obj.size());
    for (auto it = obj.begin(); it != obj.end(); ++it) keys.push_back(it.key());
    for (const auto& a : keys)
      for (const auto& b : keys)
        if (a != b) d.pair_counts[{a, b}] = 1;
    return d;
  }

  friend DependenciesFacet combine(DependenciesFacet a, const DependenciesFacet& b) {
    for (const auto& [k, n] : b.pair_counts) a.pair_counts[k] += n;
    a.singles = combine(std::move(a.singles), b.singles);
    return a;
  }

  // Dependents of each antecedent key, skipping antecedents present in
  // every object (their dependencies are implied by required).
  std::map<std::string, std::vector<std::string>> dependents() const {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& [pair, n] : pair_counts) {
      auto it = singles.counts.find(pair.first);
      if (it == singles.counts.end() || n != it->second) continue;
      if (it->second == singles.total_objects) continue;
      out[pair.first].push_back(pair.second);
    }
    return out;
  }

  bool operator==(const DependenciesFacet&) const = default;
};

// Whether every observed array contained pairwise-distinct elements, by
// canonical JSON byte equality.
struct UniqueFacet {
  bool is_unique = true;

  static UniqueFacet of(const Json& arr) {
    std::set<std::string> seen;
    for (const auto& v : arr)
      if (!seen.insert(canonical_bytes(v)).second) return UniqueFacet{false};
    return UniqueFacet{true};
  }

  friend UniqueFacet combine(const UniqueFacet& a, const UniqueFacet& b) {
    return UniqueFacet{a.is_unique && b.is_unique};
  }

  bool operator==(const UniqueFacet&) const = default;
};

}  // namespace jsonoid

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "jsonoid/schema.hpp"

namespace jsonoid {

// Deterministic generator derived from a seed and up to two stream tags
// (worker index, reduction round, ...).
std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream_a = 0,
                           std::uint64_t stream_b = 0);

// Schema exactly describing one document: kind matches the value, enabled
// facets are initialized from it, children discovered recursively.
SchemaNode discover_document(const Json& doc, const DiscoveryConfig& cfg);

// Merges two schemas discovered under the same configuration. Equivalent
// schemas combine facet by facet; non-equivalent ones form (or extend) a
// product. The rng drives Examples reservoir merging only.
SchemaNode merge_schemas(SchemaNode a, SchemaNode b, const DiscoveryConfig& cfg,
                         std::mt19937_64& rng);

// Left-fold of discover + merge over a document stream. Holds only the
// current document and two schemas at a time.
class SchemaAccumulator {
 public:
  explicit SchemaAccumulator(DiscoveryConfig cfg, std::uint64_t rng_stream = 0);

  void add(const Json& doc);
  void merge_in(SchemaNode other);

  const SchemaNode& schema() const { return acc_; }
  SchemaNode take() { return std::move(acc_); }
  std::uint64_t document_count() const { return count_; }
  const DiscoveryConfig& config() const { return cfg_; }

 private:
  DiscoveryConfig cfg_;
  SchemaNode acc_;  // kind Any until the first document arrives
  std::uint64_t count_ = 0;
  std::mt19937_64 rng_;
};

using DocumentPull = std::function<std::optional<Json>()>;

SchemaNode fold_streaming(const DocumentPull& next, const DiscoveryConfig& cfg);
SchemaNode fold_streaming(std::span<const Json> docs, const DiscoveryConfig& cfg);

// Per-batch schemas built on worker threads, then reduced pairwise. With
// deterministic facets the result canonicalizes identically to a streaming
// fold over any permutation of the same documents.
SchemaNode fold_tree(std::span<const std::vector<Json>> batches, const DiscoveryConfig& cfg,
                     std::size_t workers);

// Canonical form: property maps sorted lexicographically, product branches
// ordered by (kind name, emitted bytes), recursively. Idempotent; canonical
// forms of equal schemas emit byte-identical documents.
SchemaNode canonicalize(SchemaNode node);

}  // namespace jsonoid

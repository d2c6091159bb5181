#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jsonoid/schema.hpp"

namespace jsonoid {

struct GeneratorConfig {
  enum class Mode { Sampled, Random };
  Mode mode = Mode::Random;
  std::uint64_t seed = 0;
  // Per-property inclusion probability; when unset, observed attribute
  // frequencies are used where available, 0.5 otherwise.
  std::optional<double> inclusion_probability;
  std::size_t max_array_length = 8;
};

// Documents structurally conforming to the schema: object keys drawn
// per-property, values sampled from Examples reservoirs (sampled mode) or
// type-correct random values (random mode). Deterministic per (seed, index).
std::vector<Json> generate_documents(const SchemaNode& schema, const GeneratorConfig& cfg,
                                     std::size_t n);

struct EvalReport {
  std::optional<double> validity_fraction;  // absent when total == 0
  std::uint64_t total = 0;
  std::uint64_t valid = 0;
  std::uint64_t invalid = 0;
  std::string split;

  Json to_json() const;
};

EvalReport evaluate_validity(const Json& emitted_schema, std::span<const Json> docs);

// Seeded shuffle, discovery on the train fraction, validation of the rest.
// The overfit measure is 1 - validity_fraction of the report.
EvalReport overfit_split(std::span<const Json> corpus, const DiscoveryConfig& cfg,
                         double train_fraction = 0.9, std::uint64_t seed = 0);

}  // namespace jsonoid

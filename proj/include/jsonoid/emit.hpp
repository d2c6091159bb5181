#pragma once

#include "jsonoid/schema.hpp"

namespace jsonoid {

inline constexpr std::string_view kSchemaDialect = "https://json-schema.org/draft/2019-09/schema";
inline constexpr std::string_view kAnnotationPrefix = "x-jsonoid-";

struct EmitOptions {
  bool closed = true;       // objects get additionalProperties: false
  bool annotations = true;  // include x-jsonoid-* blocks
  std::size_t pattern_min_length = 3;  // shortest prefix/suffix worth a pattern keyword
  // Under label equivalence every object node describes documents with one
  // exact key set, so all property keys are emitted as required; this also
  // keeps sibling object branches of a product mutually exclusive.
  Equivalence equivalence = Equivalence::Kind;
};

// Emission options matching a discovery configuration.
EmitOptions emit_options_for(const DiscoveryConfig& cfg);

// Schema fragment for one node: standard keywords in a fixed canonical
// order followed by x-jsonoid-* annotations. Stripping the annotations
// leaves a plain draft 2019-09 keyword subset.
Json emit_fragment(const SchemaNode& node, const EmitOptions& options);

// Full schema document: fragment plus the $schema dialect header.
Json emit_json_schema(const SchemaNode& node, const EmitOptions& options = {});

// Serialized canonical form: UTF-8, two-space indentation, trailing newline.
std::string schema_to_string(const Json& schema);

// Removes every x-jsonoid-* key, recursively. Validation verdicts are
// unaffected since annotations never validate.
Json strip_annotations(Json schema);

}  // namespace jsonoid

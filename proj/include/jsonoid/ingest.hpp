#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "jsonoid/json.hpp"

namespace jsonoid {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParsedDocument {
  Json value;
  std::vector<std::string> warnings;  // e.g. duplicate object keys
};

// Parses one JSON document. Duplicate keys inside an object keep the last
// occurrence and produce a warning; nesting beyond kMaxNestingDepth is a
// ParseError.
ParsedDocument parse_document(std::string_view text);

enum class InputFormat { Ndjson, JsonArray };

struct ParseDiagnostic {
  std::uint64_t line = 0;  // 1-based; 0 for whole-input problems
  std::string message;
};

// Pull-based reader over NDJSON or a whole-input JSON array. Malformed
// NDJSON lines are skipped and recorded; blank lines are ignored; a UTF-8
// BOM on the first line is tolerated.
class DocumentStream {
 public:
  DocumentStream(std::istream& in, InputFormat format);

  std::optional<Json> next();

  std::uint64_t documents_yielded() const { return yielded_; }
  std::uint64_t parse_failures() const { return failures_; }
  std::uint64_t warning_count() const { return warnings_; }
  // Stored diagnostics are capped; counters above are exact.
  const std::vector<ParseDiagnostic>& diagnostics() const { return diagnostics_; }

 private:
  void record(std::uint64_t line, std::string message);

  std::istream& in_;
  InputFormat format_;
  std::uint64_t line_ = 0;
  std::uint64_t yielded_ = 0;
  std::uint64_t failures_ = 0;
  std::uint64_t warnings_ = 0;
  std::vector<ParseDiagnostic> diagnostics_;
  // json-array mode: materialized on first next()
  bool array_loaded_ = false;
  std::vector<Json> array_docs_;
  std::size_t array_pos_ = 0;
};

// Drains a stream into contiguous batches whose sizes differ by at most
// one. The union of the batches is exactly the input document multiset.
std::vector<std::vector<Json>> partition(DocumentStream& stream, std::size_t workers);
std::vector<std::vector<Json>> partition(std::vector<Json> docs, std::size_t workers);

}  // namespace jsonoid

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "jsonoid/pds/streaming_histogram.hpp"
#include "jsonoid/schema.hpp"

namespace jsonoid {

// Raised when an analysis needs a facet the discovery did not collect
// (maps to exit code 3 in the CLI).
class AnalysisUnavailableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Paths use JSON pointer syntax extended with "/*" for the elements of a
// list-mode array (tuple positions use their index).
struct ConstraintSuggestion {
  enum class Kind { PrimaryKey, ForeignKey };
  Kind kind = Kind::PrimaryKey;
  std::string subject;
  std::string target;  // foreign keys only
  Json detail;

  Json to_json() const;
};

// Attributes present in every document whose HyperLogLog estimate lies
// within `tolerance_sds` standard errors of the document count, ranked by
// relative gap. Requires the HLL and AttributeCounts facets.
std::vector<ConstraintSuggestion> suggest_primary_keys(const SchemaNode& schema,
                                                       std::uint64_t total_docs,
                                                       double tolerance_sds = 2.0);

// Ordered pairs of value paths whose Bloom filters stand in a subset
// relation, ranked by fill-ratio ratio. Requires the Bloom facet.
std::vector<ConstraintSuggestion> suggest_foreign_keys(const SchemaNode& schema);

struct OutlierThresholds {
  double z_max = 3.0;
  double f_min = 0.01;
};

struct OutlierReport {
  std::string path;      // JSON pointer into the document
  std::string category;  // numeric-zscore | length-bound | format-mismatch |
                         // unknown-attribute | rare-attribute
  Json detail;

  Json to_json() const;
};

// Per-value outliers of one document against a discovered schema.
std::vector<OutlierReport> detect_outliers(const SchemaNode& schema, const Json& doc,
                                           const OutlierThresholds& thresholds = {});

// Kolmogorov-Smirnov statistic between the step CDFs of two histograms
// (point mass at each bin value). Statistic only, no p-value.
double histogram_ks(const StreamingHistogram& h1, const StreamingHistogram& h2);

}  // namespace jsonoid

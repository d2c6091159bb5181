#include "jsonoid/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "jsonoid/facets/format.hpp"

namespace jsonoid {

namespace {

struct PkCandidate {
  std::string path;
  double estimate = 0.0;
  double gap = 0.0;
  double tolerance = 0.0;
};

// Walks object spines only: a primary key must be a plain attribute that
// appears in every document, so arrays and product alternatives cannot
// contribute candidates.
void collect_pk_candidates(const SchemaNode& node, const std::string& path,
                           std::uint64_t total_docs, double tolerance_sds,
                           std::vector<PkCandidate>& out) {
  if (node.kind != Kind::Object) return;
  if (!node.attribute_counts)
    throw AnalysisUnavailableError("primary key analysis requires the attributecounts facet");
  const auto& counts = *node.attribute_counts;
  for (const auto& [key, child] : node.properties) {
    auto it = counts.counts.find(key);
    if (it == counts.counts.end() || it->second != counts.total_objects) continue;
    if (counts.total_objects != total_docs) continue;
    std::string child_path = path + "/" + pointer_escape(key);
    if (child.kind == Kind::String || child.kind == Kind::Number) {
      if (!child.hll)
        throw AnalysisUnavailableError("primary key analysis requires the hll facet");
      PkCandidate cand;
      cand.path = child_path;
      cand.estimate = child.hll->estimate();
      cand.tolerance = tolerance_sds * child.hll->standard_error() * double(total_docs);
      cand.gap = std::abs(cand.estimate - double(total_docs));
      out.push_back(std::move(cand));
    } else if (child.kind == Kind::Object) {
      collect_pk_candidates(child, child_path, total_docs, tolerance_sds, out);
    }
  }
}

void collect_bloom_paths(const SchemaNode& node, const std::string& path,
                         std::vector<std::pair<std::string, const SchemaNode*>>& out) {
  switch (node.kind) {
    case Kind::String:
    case Kind::Number:
      out.emplace_back(path, &node);
      break;
    case Kind::Object:
      for (const auto& [key, child] : node.properties)
        collect_bloom_paths(child, path + "/" + pointer_escape(key), out);
      break;
    case Kind::Array:
      if (node.tuple_mode) {
        for (std::size_t i = 0; i < node.items.size(); ++i)
          collect_bloom_paths(node.items[i], path + "/" + std::to_string(i), out);
      } else {
        collect_bloom_paths(node.items.at(0), path + "/*", out);
      }
      break;
    case Kind::Product:
      for (const SchemaNode& branch : node.branches) collect_bloom_paths(branch, path, out);
      break;
    default:
      break;
  }
}

}  // namespace

Json ConstraintSuggestion::to_json() const {
  Json j{{"kind", kind == Kind::PrimaryKey ? "primary-key" : "foreign-key"},
         {"subject", subject}};
  if (kind == Kind::ForeignKey) j["target"] = target;
  j["detail"] = detail;
  return j;
}

std::vector<ConstraintSuggestion> suggest_primary_keys(const SchemaNode& schema,
                                                       std::uint64_t total_docs,
                                                       double tolerance_sds) {
  if (total_docs == 0 || schema.kind == Kind::Any) return {};
  std::vector<PkCandidate> candidates;
  collect_pk_candidates(schema, "", total_docs, tolerance_sds, candidates);

  std::vector<ConstraintSuggestion> out;
  for (PkCandidate& cand : candidates) {
    if (cand.gap > cand.tolerance) continue;
    ConstraintSuggestion s;
    s.kind = ConstraintSuggestion::Kind::PrimaryKey;
    s.subject = cand.path;
    s.detail = Json{{"estimate", cand.estimate},
                    {"total", total_docs},
                    {"tolerance", cand.tolerance},
                    {"relative_gap", cand.gap / double(total_docs)}};
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    double ga = a.detail.at("relative_gap").template get<double>();
    double gb = b.detail.at("relative_gap").template get<double>();
    return ga != gb ? ga < gb : a.subject < b.subject;
  });
  return out;
}

std::vector<ConstraintSuggestion> suggest_foreign_keys(const SchemaNode& schema) {
  if (schema.kind == Kind::Any) return {};
  std::vector<std::pair<std::string, const SchemaNode*>> paths;
  collect_bloom_paths(schema, "", paths);
  if (paths.empty()) return {};
  for (const auto& [path, node] : paths)
    if (!node->bloom)
      throw AnalysisUnavailableError("foreign key analysis requires the bloom facet");

  std::vector<ConstraintSuggestion> out;
  for (const auto& [path_a, node_a] : paths) {
    for (const auto& [path_b, node_b] : paths) {
      if (path_a == path_b) continue;
      if (!node_a->bloom->subset_of(*node_b->bloom)) continue;
      ConstraintSuggestion s;
      s.kind = ConstraintSuggestion::Kind::ForeignKey;
      s.subject = path_a;
      s.target = path_b;
      double fill_a = node_a->bloom->fill_ratio();
      double fill_b = node_b->bloom->fill_ratio();
      s.detail = Json{{"subject_fill", fill_a},
                      {"target_fill", fill_b},
                      {"fill_ratio", fill_b > 0.0 ? fill_a / fill_b : 0.0}};
      out.push_back(std::move(s));
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    double ra = a.detail.at("fill_ratio").template get<double>();
    double rb = b.detail.at("fill_ratio").template get<double>();
    if (ra != rb) return ra > rb;
    if (a.subject != b.subject) return a.subject < b.subject;
    return a.target < b.target;
  });
  return out;
}

namespace {

const SchemaNode* matching_branch(const SchemaNode& product, const Json& value) {
  auto kind_of = [](const Json& v) {
    if (v.is_object()) return Kind::Object;
    if (v.is_array()) return Kind::Array;
    if (v.is_string()) return Kind::String;
    if (v.is_number()) return Kind::Number;
    if (v.is_boolean()) return Kind::Boolean;
    return Kind::Null;
  };
  Kind k = kind_of(value);
  const SchemaNode* first = nullptr;
  for (const SchemaNode& branch : product.branches) {
    if (branch.kind != k) continue;
    if (!first) first = &branch;
    if (k != Kind::Object) break;
    // several object branches can coexist under label equivalence; prefer
    // the one with exactly this document's key set
    std::set<std::string> doc_keys;
    for (auto it = value.begin(); it != value.end(); ++it) doc_keys.insert(it.key());
    if (branch.property_keys() == doc_keys) return &branch;
  }
  return first;
}

void walk_outliers(const SchemaNode& node, const Json& value, const std::string& path,
                   const OutlierThresholds& thresholds, std::vector<OutlierReport>& out) {
  const SchemaNode* schema = &node;
  if (schema->kind == Kind::Product) {
    schema = matching_branch(*schema, value);
    if (!schema) return;  // kind mismatch is validation's business
  }

  switch (schema->kind) {
    case Kind::Number: {
      if (!value.is_number()) return;
      if (schema->moments && schema->moments->count() >= 2) {
        auto rep = schema->moments->report();
        if (rep.stddev && *rep.stddev > 0.0) {
          double z = std::abs(value.get<double>() - *rep.mean) / *rep.stddev;
          if (z > thresholds.z_max)
            out.push_back({path, "numeric-zscore",
                           Json{{"observed", value},
                                {"mean", *rep.mean},
                                {"stddev", *rep.stddev},
                                {"zscore", z},
                                {"threshold", thresholds.z_max}}});
        }
      }
      break;
    }
    case Kind::String: {
      if (!value.is_string()) return;
      const auto& s = value.get_ref<const std::string&>();
      if (schema->string_length) {
        Json len(utf8_length(s));
        if (!schema->string_length->contains(len))
          out.push_back({path, "length-bound",
                         Json{{"observed", len},
                              {"min", schema->string_length->min},
                              {"max", schema->string_length->max}}});
      }
      if (schema->format) {
        if (auto f = schema->format->emitted(); f && !matches_format(s, *f))
          out.push_back({path, "format-mismatch",
                         Json{{"observed", value}, {"expected", format_name(*f)}}});
      }
      break;
    }
    case Kind::Array: {
      if (!value.is_array()) return;
      if (schema->array_length) {
        Json len(value.size());
        if (!schema->array_length->contains(len))
          out.push_back({path, "length-bound",
                         Json{{"observed", len},
                              {"min", schema->array_length->min},
                              {"max", schema->array_length->max}}});
      }
      if (schema->tuple_mode) {
        for (std::size_t i = 0; i < value.size() && i < schema->items.size(); ++i)
          walk_outliers(schema->items[i], value[i], path + "/" + std::to_string(i), thresholds,
                        out);
      } else if (schema->items.at(0).kind != Kind::Any) {
        for (std::size_t i = 0; i < value.size(); ++i)
          walk_outliers(schema->items[0], value[i], path + "/" + std::to_string(i), thresholds,
                        out);
      }
      break;
    }
    case Kind::Object: {
      if (!value.is_object()) return;
      for (auto it = value.begin(); it != value.end(); ++it) {
        std::string child_path = path + "/" + pointer_escape(it.key());
        const SchemaNode* child = schema->find_property(it.key());
        if (!child) {
          out.push_back({child_path, "unknown-attribute", Json{{"key", it.key()}}});
          continue;
        }
        if (schema->attribute_counts && schema->attribute_counts->total_objects > 0) {
          auto c = schema->attribute_counts->counts.find(it.key());
          double freq = c == schema->attribute_counts->counts.end()
                            ? 0.0
                            : double(c->second) / double(schema->attribute_counts->total_objects);
          if (freq < thresholds.f_min)
            out.push_back({child_path, "rare-attribute",
                           Json{{"key", it.key()},
                                {"frequency", freq},
                                {"threshold", thresholds.f_min}}});
        }
        walk_outliers(*child, it.value(), child_path, thresholds, out);
      }
      break;
    }
    default:
      break;
  }
}

}  // namespace

Json OutlierReport::to_json() const {
  return Json{{"path", path}, {"category", category}, {"detail", detail}};
}

std::vector<OutlierReport> detect_outliers(const SchemaNode& schema, const Json& doc,
                                           const OutlierThresholds& thresholds) {
  std::vector<OutlierReport> out;
  walk_outliers(schema, doc, "", thresholds, out);
  return out;
}

double histogram_ks(const StreamingHistogram& h1, const StreamingHistogram& h2) {
  if (h1.total() == 0 || h2.total() == 0)
    throw std::invalid_argument("histogram_ks: empty histogram");
  const auto& b1 = h1.bins();
  const auto& b2 = h2.bins();
  std::size_t i = 0, j = 0;
  double c1 = 0.0, c2 = 0.0, d = 0.0;
  while (i < b1.size() || j < b2.size()) {
    double v;
    if (j >= b2.size() || (i < b1.size() && b1[i].value < b2[j].value))
      v = b1[i].value;
    else if (i >= b1.size() || b2[j].value < b1[i].value)
      v = b2[j].value;
    else
      v = b1[i].value;
    while (i < b1.size() && b1[i].value == v) c1 += double(b1[i++].count);
    while (j < b2.size() && b2[j].value == v) c2 += double(b2[j++].count);
    d = std::max(d, std::abs(c1 / double(h1.total()) - c2 / double(h2.total())));
  }
  return d;
}

}  // namespace jsonoid

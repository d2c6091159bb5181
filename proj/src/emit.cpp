#include "jsonoid/emit.hpp"

#include <algorithm>
#include <cstring>

#include "jsonoid/base64.hpp"

namespace jsonoid {

namespace {

void append_u64_le(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}

std::string bloom_payload(const BloomFilter& f) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(8 + f.words().size() * 8);
  append_u64_le(bytes, f.words().size());
  for (std::uint64_t w : f.words()) append_u64_le(bytes, w);
  return base64_encode(bytes);
}

std::string hll_payload(const HyperLogLog& h) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(8 + h.registers().size());
  append_u64_le(bytes, h.registers().size());
  bytes.insert(bytes.end(), h.registers().begin(), h.registers().end());
  return base64_encode(bytes);
}

void emit_value_annotations(Json& out, const SchemaNode& node) {
  if (node.examples) {
    Json values = Json::array();
    std::vector<const Json*> sorted;
    sorted.reserve(node.examples->examples.size());
    for (const Json& v : node.examples->examples) sorted.push_back(&v);
    std::sort(sorted.begin(), sorted.end(), [](const Json* a, const Json* b) {
      return canonical_bytes(*a) < canonical_bytes(*b);
    });
    for (const Json* v : sorted) values.push_back(*v);
    out["x-jsonoid-examples"] = Json{{"total", node.examples->total},
                                     {"examples", std::move(values)}};
  }
  if (node.bloom)
    out["x-jsonoid-bloom"] = Json{{"m", node.bloom->bits()},
                                  {"k", node.bloom->hashes()},
                                  {"payload", bloom_payload(*node.bloom)}};
  if (node.hll)
    out["x-jsonoid-hll"] = Json{{"p", node.hll->precision()},
                                {"payload", hll_payload(*node.hll)}};
}

}  // namespace

Json emit_fragment(const SchemaNode& node, const EmitOptions& options) {
  Json out = Json::object();
  switch (node.kind) {
    case Kind::Any:
      break;
    case Kind::Null:
    case Kind::Boolean:
      out["type"] = kind_name(node.kind);
      break;
    case Kind::Number: {
      out["type"] = node.integral ? "integer" : "number";
      if (node.range) {
        out["minimum"] = normalize_number(node.range->min);
        out["maximum"] = normalize_number(node.range->max);
      }
      if (node.multiple && node.multiple->emits()) out["multipleOf"] = node.multiple->gcd;
      if (options.annotations) {
        emit_value_annotations(out, node);
        if (node.histogram) {
          Json bins = Json::array();
          for (const auto& b : node.histogram->bins()) bins.push_back(Json{b.value, b.count});
          out["x-jsonoid-histogram"] = Json{{"bins", std::move(bins)}};
        }
        if (node.moments) {
          auto rep = node.moments->report();
          Json m{{"count", rep.count}};
          if (rep.mean) m["mean"] = *rep.mean;
          if (rep.stddev) m["stddev"] = *rep.stddev;
          if (rep.skewness) m["skewness"] = *rep.skewness;
          if (rep.kurtosis) m["kurtosis"] = *rep.kurtosis;
          out["x-jsonoid-moments"] = std::move(m);
        }
      }
      break;
    }
    case Kind::String: {
      out["type"] = "string";
      if (node.string_length) {
        out["minLength"] = node.string_length->min;
        out["maxLength"] = node.string_length->max;
      }
      if (node.pattern) {
        std::string re = pattern_regex(*node.pattern, options.pattern_min_length);
        if (!re.empty()) out["pattern"] = re;
      }
      if (node.format) {
        if (auto f = node.format->emitted()) out["format"] = format_name(*f);
      }
      if (options.annotations) emit_value_annotations(out, node);
      break;
    }
    case Kind::Array: {
      out["type"] = "array";
      if (node.tuple_mode) {
        Json items = Json::array();
        for (const SchemaNode& item : node.items) items.push_back(emit_fragment(item, options));
        out["items"] = std::move(items);
        out["additionalItems"] = false;
      } else {
        out["items"] = emit_fragment(node.items.at(0), options);
      }
      if (node.array_length) {
        out["minItems"] = node.array_length->min;
        out["maxItems"] = node.array_length->max;
      }
      if (node.unique && node.unique->is_unique) out["uniqueItems"] = true;
      break;
    }
    case Kind::Object: {
      out["type"] = "object";
      Json props = Json::object();
      for (const auto& [key, child] : node.properties) props[key] = emit_fragment(child, options);
      out["properties"] = std::move(props);
      if (options.equivalence == Equivalence::Label) {
        // every observed object of this node had exactly these keys
        if (!node.properties.empty()) {
          Json req = Json::array();
          for (const auto& [key, _] : node.properties) req.push_back(key);
          out["required"] = std::move(req);
        }
      } else if (node.required && !node.required->keys.empty()) {
        Json req = Json::array();
        for (const auto& k : node.required->keys) req.push_back(k);
        out["required"] = std::move(req);
      }
      if (options.closed) out["additionalProperties"] = false;
      if (node.dependencies) {
        auto deps = node.dependencies->dependents();
        if (!deps.empty()) {
          Json dr = Json::object();
          for (const auto& [a, bs] : deps) {
            Json list = Json::array();
            for (const auto& b : bs) list.push_back(b);
            dr[a] = std::move(list);
          }
          out["dependentRequired"] = std::move(dr);
        }
      }
      if (options.annotations && node.attribute_counts) {
        Json freq = Json::object();
        for (const auto& [k, n] : node.attribute_counts->counts)
          freq[k] = double(n) / double(node.attribute_counts->total_objects);
        out["x-jsonoid-attribute-frequencies"] = std::move(freq);
      }
      break;
    }
    case Kind::Product: {
      Json branches = Json::array();
      for (const SchemaNode& branch : node.branches)
        branches.push_back(emit_fragment(branch, options));
      out["oneOf"] = std::move(branches);
      break;
    }
  }
  return out;
}

EmitOptions emit_options_for(const DiscoveryConfig& cfg) {
  EmitOptions options;
  options.pattern_min_length = cfg.pattern_min_length;
  options.equivalence = cfg.equivalence;
  return options;
}

Json emit_json_schema(const SchemaNode& node, const EmitOptions& options) {
  Json out = Json::object();
  out["$schema"] = kSchemaDialect;
  Json body = emit_fragment(node, options);
  for (auto it = body.begin(); it != body.end(); ++it) out[it.key()] = std::move(it.value());
  return out;
}

std::string schema_to_string(const Json& schema) {
  return schema.dump(2) + "\n";
}

Json strip_annotations(Json schema) {
  if (schema.is_object()) {
    Json out = Json::object();
    for (auto it = schema.begin(); it != schema.end(); ++it) {
      if (it.key().rfind(kAnnotationPrefix, 0) == 0) continue;
      out[it.key()] = strip_annotations(std::move(it.value()));
    }
    return out;
  }
  if (schema.is_array()) {
    Json out = Json::array();
    for (auto& v : schema) out.push_back(strip_annotations(std::move(v)));
    return out;
  }
  return schema;
}

}  // namespace jsonoid

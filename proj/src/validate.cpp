#include "jsonoid/validate.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <stdexcept>

#include "jsonoid/emit.hpp"
#include "jsonoid/facets/format.hpp"

namespace jsonoid {

namespace {

const std::set<std::string_view> kKnownKeywords{
    "$schema",       "type",      "properties", "required",  "additionalProperties",
    "dependentRequired", "items", "additionalItems", "minItems", "maxItems",
    "uniqueItems",   "minLength", "maxLength",  "pattern",   "format",
    "minimum",       "maximum",   "multipleOf", "oneOf",
};

bool is_annotation(std::string_view key) {
  return key.rfind(kAnnotationPrefix, 0) == 0;
}

// Patterns recur across nodes and documents; compile each distinct source
// once per thread.
const std::regex& compiled_pattern(const std::string& source) {
  thread_local std::map<std::string, std::regex> cache;
  auto it = cache.find(source);
  if (it == cache.end())
    it = cache.emplace(source, std::regex(source, std::regex::ECMAScript)).first;
  return it->second;
}

bool type_matches(std::string_view type, const Json& doc) {
  if (type == "object") return doc.is_object();
  if (type == "array") return doc.is_array();
  if (type == "string") return doc.is_string();
  if (type == "boolean") return doc.is_boolean();
  if (type == "null") return doc.is_null();
  if (type == "number") return doc.is_number();
  if (type == "integer") return doc.is_number() && is_integral_number(doc);
  throw std::invalid_argument("validate: unsupported type value '" + std::string(type) + "'");
}

// Magnitude of an integral JSON number, or nullopt when it cannot be
// represented in 64 bits (doubles beyond 2^53 are not trusted either).
std::optional<std::uint64_t> integer_magnitude(const Json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    auto x = v.get<std::int64_t>();
    return x < 0 ? ~std::uint64_t(x) + 1 : std::uint64_t(x);
  }
  double d = v.get<double>();
  if (!std::isfinite(d) || std::abs(d) >= 9.007199254740992e15) return std::nullopt;
  auto x = static_cast<std::int64_t>(d);
  return x < 0 ? ~std::uint64_t(x) + 1 : std::uint64_t(x);
}

struct Checker {
  std::vector<Violation>* out;

  void fail(const std::string& path, std::string keyword, std::string message) {
    if (out) out->push_back({path, std::move(keyword), std::move(message)});
  }

  // Returns true when the document satisfies the schema; when `out` is
  // null this is a pure check (used for oneOf branch counting).
  bool check(const Json& schema, const Json& doc, const std::string& path) {
    if (!schema.is_object())
      throw std::invalid_argument("validate: schema must be a JSON object");

    bool ok = true;
    for (auto it = schema.begin(); it != schema.end(); ++it) {
      const std::string& key = it.key();
      if (is_annotation(key)) continue;
      if (!kKnownKeywords.count(key))
        throw std::invalid_argument("validate: unknown keyword '" + key + "'");
    }

    if (auto it = schema.find("type"); it != schema.end()) {
      if (!type_matches(it->get_ref<const std::string&>(), doc)) {
        fail(path, "type", "expected " + it->get<std::string>());
        return false;  // remaining keywords assume the type matched
      }
    }

    if (auto it = schema.find("oneOf"); it != schema.end()) {
      int matched = 0;
      Checker quiet{nullptr};
      for (const Json& branch : *it)
        if (quiet.check(branch, doc, path)) ++matched;
      if (matched != 1) {
        fail(path, "oneOf", std::to_string(matched) + " branches matched, expected exactly 1");
        ok = false;
      }
    }

    if (doc.is_object()) ok = check_object(schema, doc, path) && ok;
    if (doc.is_array()) ok = check_array(schema, doc, path) && ok;
    if (doc.is_string()) ok = check_string(schema, doc, path) && ok;
    if (doc.is_number()) ok = check_number(schema, doc, path) && ok;
    return ok;
  }

  bool check_object(const Json& schema, const Json& doc, const std::string& path) {
    bool ok = true;
    const Json* props = nullptr;
    if (auto it = schema.find("properties"); it != schema.end()) props = &*it;

    bool closed = false;
    if (auto it = schema.find("additionalProperties"); it != schema.end()) {
      if (!it->is_boolean())
        throw std::invalid_argument("validate: additionalProperties must be boolean");
      closed = !it->get<bool>();
    }

    if (auto it = schema.find("required"); it != schema.end()) {
      for (const Json& k : *it) {
        if (!doc.contains(k.get_ref<const std::string&>())) {
          fail(path, "required", "missing property '" + k.get<std::string>() + "'");
          ok = false;
        }
      }
    }

    if (auto it = schema.find("dependentRequired"); it != schema.end()) {
      for (auto dep = it->begin(); dep != it->end(); ++dep) {
        if (!doc.contains(dep.key())) continue;
        for (const Json& k : dep.value()) {
          if (!doc.contains(k.get_ref<const std::string&>())) {
            fail(path, "dependentRequired",
                 "property '" + dep.key() + "' requires '" + k.get<std::string>() + "'");
            ok = false;
          }
        }
      }
    }

    for (auto it = doc.begin(); it != doc.end(); ++it) {
      std::string child_path = path + "/" + pointer_escape(it.key());
      const Json* child_schema = nullptr;
      if (props) {
        if (auto p = props->find(it.key()); p != props->end()) child_schema = &*p;
      }
      if (child_schema) {
        ok = check(*child_schema, it.value(), child_path) && ok;
      } else if (closed) {
        fail(child_path, "additionalProperties", "property not allowed by closed schema");
        ok = false;
      }
    }
    return ok;
  }

  bool check_array(const Json& schema, const Json& doc, const std::string& path) {
    bool ok = true;
    if (auto it = schema.find("minItems"); it != schema.end()) {
      if (compare_numbers(Json(doc.size()), *it) < 0) {
        fail(path, "minItems", "array too short");
        ok = false;
      }
    }
    if (auto it = schema.find("maxItems"); it != schema.end()) {
      if (compare_numbers(Json(doc.size()), *it) > 0) {
        fail(path, "maxItems", "array too long");
        ok = false;
      }
    }
    if (auto it = schema.find("uniqueItems"); it != schema.end() && it->get<bool>()) {
      std::set<std::string> seen;
      for (const Json& v : doc) {
        if (!seen.insert(canonical_bytes(v)).second) {
          fail(path, "uniqueItems", "duplicate array element");
          ok = false;
          break;
        }
      }
    }
    if (auto it = schema.find("items"); it != schema.end()) {
      if (it->is_array()) {
        bool closed_tail = false;
        if (auto ai = schema.find("additionalItems"); ai != schema.end())
          closed_tail = !ai->get<bool>();
        if (closed_tail && doc.size() > it->size()) {
          fail(path, "additionalItems", "array longer than tuple");
          ok = false;
        }
        for (std::size_t i = 0; i < doc.size() && i < it->size(); ++i)
          ok = check((*it)[i], doc[i], path + "/" + std::to_string(i)) && ok;
      } else {
        for (std::size_t i = 0; i < doc.size(); ++i)
          ok = check(*it, doc[i], path + "/" + std::to_string(i)) && ok;
      }
    }
    return ok;
  }

  bool check_string(const Json& schema, const Json& doc, const std::string& path) {
    bool ok = true;
    const auto& s = doc.get_ref<const std::string&>();
    std::uint64_t len = utf8_length(s);
    if (auto it = schema.find("minLength"); it != schema.end()) {
      if (compare_numbers(Json(len), *it) < 0) {
        fail(path, "minLength", "string too short");
        ok = false;
      }
    }
    if (auto it = schema.find("maxLength"); it != schema.end()) {
      if (compare_numbers(Json(len), *it) > 0) {
        fail(path, "maxLength", "string too long");
        ok = false;
      }
    }
    if (auto it = schema.find("pattern"); it != schema.end()) {
      if (!std::regex_search(s, compiled_pattern(it->get_ref<const std::string&>()))) {
        fail(path, "pattern", "string does not match pattern");
        ok = false;
      }
    }
    if (auto it = schema.find("format"); it != schema.end()) {
      auto fmt = format_from_name(it->get_ref<const std::string&>());
      if (!fmt)
        throw std::invalid_argument("validate: unknown format '" + it->get<std::string>() + "'");
      if (!matches_format(s, *fmt)) {
        fail(path, "format", "string is not a valid " + it->get<std::string>());
        ok = false;
      }
    }
    return ok;
  }

  bool check_number(const Json& schema, const Json& doc, const std::string& path) {
    bool ok = true;
    if (auto it = schema.find("minimum"); it != schema.end()) {
      if (compare_numbers(doc, *it) < 0) {
        fail(path, "minimum", "value below minimum");
        ok = false;
      }
    }
    if (auto it = schema.find("maximum"); it != schema.end()) {
      if (compare_numbers(doc, *it) > 0) {
        fail(path, "maximum", "value above maximum");
        ok = false;
      }
    }
    if (auto it = schema.find("multipleOf"); it != schema.end()) {
      if (!is_integral_number(*it))
        throw std::invalid_argument("validate: non-integer multipleOf unsupported");
      auto divisor = integer_magnitude(*it);
      if (!divisor || *divisor == 0)
        throw std::invalid_argument("validate: multipleOf out of supported range");
      std::optional<std::uint64_t> magnitude;
      if (is_integral_number(doc)) magnitude = integer_magnitude(doc);
      if (!magnitude || *magnitude % *divisor != 0) {
        fail(path, "multipleOf", "value is not a multiple of " + it->dump());
        ok = false;
      }
    }
    return ok;
  }
};

}  // namespace

ValidationOutcome validate(const Json& schema, const Json& doc) {
  ValidationOutcome outcome;
  Checker checker{&outcome.violations};
  checker.check(schema, doc, "");
  outcome.valid = outcome.violations.empty();
  return outcome;
}

}  // namespace jsonoid

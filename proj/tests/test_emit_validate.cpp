#include <doctest.h>

#include <functional>
#include <random>
#include <set>

#include "jsonoid/discovery.hpp"
#include "jsonoid/emit.hpp"
#include "jsonoid/validate.hpp"
#include "corpus_gen.hpp"

using namespace jsonoid;

namespace {

DiscoveryConfig config(FacetSet facets, Equivalence eq = Equivalence::Kind,
                       std::uint64_t seed = 0) {
  DiscoveryConfig cfg;
  cfg.facets = facets;
  cfg.equivalence = eq;
  cfg.rng_seed = seed;
  return cfg;
}

Json discover_and_emit(const std::vector<Json>& docs, const DiscoveryConfig& cfg) {
  return emit_json_schema(canonicalize(fold_streaming(docs, cfg)), emit_options_for(cfg));
}

Json discover_and_emit(const std::vector<Json>& docs, const DiscoveryConfig& cfg,
                       EmitOptions options) {
  options.pattern_min_length = cfg.pattern_min_length;
  options.equivalence = cfg.equivalence;
  return emit_json_schema(canonicalize(fold_streaming(docs, cfg)), options);
}

}  // namespace

TEST_CASE("emit: one-document person corpus") {
  auto cfg = config(FacetSet::simple());
  Json doc = Json::parse(R"({"firstName":"Carla","lastName":"Singh","age":43})");
  Json schema = discover_and_emit({doc}, cfg);

  CHECK(schema.at("$schema") == Json(std::string(kSchemaDialect)));
  CHECK(schema.at("type") == Json("object"));
  CHECK(schema.at("properties").contains("firstName"));
  CHECK(schema.at("properties").contains("lastName"));
  CHECK(schema.at("properties").at("age").at("type") == Json("integer"));
  CHECK(schema.at("properties").at("age").at("minimum") == Json(43));
  CHECK(schema.at("required") == Json::parse(R"(["age","firstName","lastName"])"));
  CHECK(schema.at("additionalProperties") == Json(false));
  CHECK(validate(schema, doc).valid);
}

TEST_CASE("emit: any item schema is the empty schema") {
  auto cfg = config(FacetSet::minimum());
  Json schema = discover_and_emit({Json::parse("[]")}, cfg);
  CHECK(schema.at("items") == Json::object());
}

TEST_CASE("emit: number keywords from facet values") {
  // gcd 5, min 10, max 45 over integral observations
  auto cfg = config(FacetSet::simple());
  std::vector<Json> docs{Json(10), Json(45), Json(25)};
  Json schema = discover_and_emit(docs, cfg);
  CHECK(schema.at("type") == Json("integer"));
  CHECK(schema.at("multipleOf") == Json(5));
  CHECK(schema.at("minimum") == Json(10));
  CHECK(schema.at("maximum") == Json(45));
}

TEST_CASE("emit: trivial gcd is not emitted") {
  auto cfg = config(FacetSet::simple());
  Json schema = discover_and_emit({Json(7), Json(13)}, cfg);
  CHECK(!schema.contains("multipleOf"));
}

TEST_CASE("emit: tuple arrays use positional items with a closed tail") {
  auto cfg = config(FacetSet::simple());
  Json schema = discover_and_emit({Json::parse(R"([1, "x"])")}, cfg);
  REQUIRE(schema.at("items").is_array());
  CHECK(schema.at("items")[0].at("type") == Json("integer"));
  CHECK(schema.at("items")[1].at("type") == Json("string"));
  CHECK(schema.at("additionalItems") == Json(false));
  CHECK(schema.at("uniqueItems") == Json(true));
  CHECK(schema.at("minItems") == Json(2));
  CHECK(schema.at("maxItems") == Json(2));
}

TEST_CASE("emit: products become oneOf") {
  auto cfg = config(FacetSet::minimum());
  Json schema = discover_and_emit({Json(1), Json("x")}, cfg);
  REQUIRE(schema.contains("oneOf"));
  CHECK(schema.at("oneOf").size() == 2);
}

TEST_CASE("emit: open flag drops additionalProperties") {
  auto cfg = config(FacetSet::minimum());
  EmitOptions open;
  open.closed = false;
  Json schema = discover_and_emit({Json::parse(R"({"a":1})")}, cfg, open);
  CHECK(!schema.contains("additionalProperties"));
  CHECK(validate(schema, Json::parse(R"({"a":1,"extra":true})")).valid);
}

TEST_CASE("emit: deterministic byte output for a canonical node") {
  auto cfg = config(FacetSet::all(), Equivalence::Kind, 3);
  auto docs = corpus::random_corpus(70, 50);
  CHECK(schema_to_string(discover_and_emit(docs, cfg)) ==
        schema_to_string(discover_and_emit(docs, cfg)));
}

TEST_CASE("emit: dependentRequired reflects non-trivial dependencies") {
  auto cfg = config(FacetSet::simple());
  std::vector<Json> docs{Json::parse(R"({"id":1,"city":"a","state":"b"})"),
                         Json::parse(R"({"id":2,"city":"c","state":"d"})"),
                         Json::parse(R"({"id":3,"state":"e"})"),
                         Json::parse(R"({"id":4})")};
  Json schema = discover_and_emit(docs, cfg);
  REQUIRE(schema.contains("dependentRequired"));
  // required antecedents are filtered; "id" as a dependent stays since
  // the antecedents here are optional
  CHECK(schema.at("dependentRequired") ==
        Json::parse(R"({"city":["id","state"],"state":["id"]})"));
  for (const auto& d : docs) CHECK(validate(schema, d).valid);
  CHECK(!validate(schema, Json::parse(R"({"id":5,"city":"x"})")).valid);
}

TEST_CASE("validate: closed object rejects unknown attributes") {
  auto cfg = config(FacetSet::minimum());
  Json schema = discover_and_emit({Json::parse(R"({"a":1})")}, cfg);
  auto outcome = validate(schema, Json::parse(R"({"a":1,"b":2})"));
  REQUIRE(!outcome.valid);
  CHECK(outcome.violations[0].keyword == "additionalProperties");
  CHECK(outcome.violations[0].path == "/b");
}

TEST_CASE("validate: format violations carry the pointer path") {
  auto cfg = config(FacetSet::simple());
  std::vector<Json> docs{Json::parse(R"({"funding":{"url":"https://a.org/x"}})"),
                         Json::parse(R"({"funding":{"url":"https://b.org/y"}})")};
  Json schema = discover_and_emit(docs, cfg);
  Json random_doc = Json::parse(R"({"funding":{"url":"BF1gv"}})");
  auto outcome = validate(schema, random_doc);
  REQUIRE(!outcome.valid);
  bool format_violation_at_url = false;
  for (const auto& v : outcome.violations)
    if (v.keyword == "format" && v.path == "/funding/url") format_violation_at_url = true;
  CHECK(format_violation_at_url);
}

TEST_CASE("validate: unknown keyword is a hard error") {
  Json schema = Json::parse(R"({"type":"string","patternProperties":{}})");
  CHECK_THROWS_AS((void)validate(schema, Json("x")), std::invalid_argument);
}

TEST_CASE("validate: annotations never affect verdicts") {
  Json schema = Json::parse(R"({"type":"integer","x-jsonoid-examples":{"total":1}})");
  CHECK(validate(schema, Json(5)).valid);
}

TEST_CASE("validate: oneOf requires exactly one branch") {
  Json schema = Json::parse(R"({"oneOf":[{"type":"integer"},{"type":"string"}]})");
  CHECK(validate(schema, Json(1)).valid);
  CHECK(validate(schema, Json("x")).valid);
  CHECK(!validate(schema, Json(true)).valid);
  Json ambiguous = Json::parse(R"({"oneOf":[{"type":"integer"},{"type":"number"}]})");
  CHECK(!validate(ambiguous, Json(1)).valid);   // both branches match
  CHECK(validate(ambiguous, Json(1.5)).valid);  // only "number" matches
}

TEST_CASE("validate: integer type accepts integral doubles") {
  Json schema = Json::parse(R"({"type":"integer"})");
  CHECK(validate(schema, Json(2.0)).valid);
  CHECK(!validate(schema, Json(2.5)).valid);
}

TEST_CASE("validate: string lengths count unicode scalars") {
  Json schema = Json::parse(R"({"type":"string","minLength":2,"maxLength":2})");
  CHECK(validate(schema, Json("日本")).valid);
  CHECK(!validate(schema, Json("日本語")).valid);
}

TEST_CASE("validate: tuple items enforce the closed tail") {
  Json schema =
      Json::parse(R"({"type":"array","items":[{"type":"integer"}],"additionalItems":false})");
  CHECK(validate(schema, Json::parse("[1]")).valid);
  CHECK(validate(schema, Json::parse("[]")).valid);  // shorter is fine
  CHECK(!validate(schema, Json::parse("[1,2]")).valid);
  CHECK(!validate(schema, Json::parse(R"(["x"])")).valid);
}

TEST_CASE("validate: empty schema accepts everything") {
  Json schema = Json::object();
  CHECK(validate(schema, Json(1)).valid);
  CHECK(validate(schema, Json::parse(R"({"any":"thing"})")).valid);
}

TEST_CASE("strip_annotations: identical verdicts on 1000 random documents") {
  auto cfg = config(FacetSet::all(), Equivalence::Kind, 9);
  auto train = corpus::random_corpus(71, 200);
  Json schema = discover_and_emit(train, cfg);
  Json stripped = strip_annotations(schema);

  // stripping leaves only standard keywords
  std::function<void(const Json&)> assert_no_annotations = [&](const Json& j) {
    if (j.is_object()) {
      for (auto it = j.begin(); it != j.end(); ++it) {
        CHECK(it.key().rfind("x-jsonoid-", 0) != 0);
        assert_no_annotations(it.value());
      }
    } else if (j.is_array()) {
      for (const auto& v : j) assert_no_annotations(v);
    }
  };
  assert_no_annotations(stripped);

  auto probes = corpus::random_corpus(72, 1000);
  for (const auto& doc : probes)
    CHECK(validate(schema, doc).valid == validate(stripped, doc).valid);
}

TEST_CASE("strip_annotations: idempotent and round-trip stable") {
  auto cfg = config(FacetSet::simple());
  Json schema = discover_and_emit({Json::parse(R"({"a":1})")}, cfg);
  Json once = strip_annotations(schema);
  CHECK(strip_annotations(once).dump() == once.dump());
  // parse(emit) round-trips byte-identically
  std::string text = schema_to_string(schema);
  CHECK(schema_to_string(Json::parse(text)) == text);
}

TEST_CASE("oneOf branches under kind equivalence have distinct types") {
  auto cfg = config(FacetSet::simple(), Equivalence::Kind, 4);
  for (std::uint64_t seed : {80, 81, 82, 83}) {
    auto docs = corpus::random_corpus(seed, 150);
    Json schema = discover_and_emit(docs, cfg);
    std::function<void(const Json&)> walk = [&](const Json& j) {
      if (j.is_object()) {
        if (auto it = j.find("oneOf"); it != j.end()) {
          std::set<std::string> types;
          for (const auto& branch : *it) {
            REQUIRE(branch.contains("type"));
            types.insert(branch.at("type").get<std::string>());
          }
          CHECK(types.size() == it->size());
        }
        for (auto it = j.begin(); it != j.end(); ++it) walk(it.value());
      } else if (j.is_array()) {
        for (const auto& v : j) walk(v);
      }
    };
    walk(schema);
  }
}

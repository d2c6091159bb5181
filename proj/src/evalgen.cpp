#include "jsonoid/evalgen.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "jsonoid/analysis.hpp"
#include "jsonoid/discovery.hpp"
#include "jsonoid/emit.hpp"
#include "jsonoid/validate.hpp"

namespace jsonoid {

namespace {

constexpr std::string_view kAlphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";

std::string random_string(std::mt19937_64& rng) {
  // alphanumeric, geometric length with mean 8, capped at 64
  std::geometric_distribution<std::size_t> geom(1.0 / 8.0);
  std::size_t len = std::min<std::size_t>(64, 1 + geom(rng));
  std::uniform_int_distribution<std::size_t> pick(0, kAlphabet.size() - 1);
  std::string s;
  s.reserve(len);
  for (std::size_t i = 0; i < len; ++i) s += kAlphabet[pick(rng)];
  return s;
}

struct Generator {
  const GeneratorConfig& cfg;
  std::mt19937_64& rng;

  Json value_for(const SchemaNode& node) {
    switch (node.kind) {
      case Kind::Null:
      case Kind::Any:
        return Json(nullptr);
      case Kind::Boolean:
        return Json(std::uniform_int_distribution<int>(0, 1)(rng) == 1);
      case Kind::Number:
        return number_for(node);
      case Kind::String:
        return string_for(node);
      case Kind::Array:
        return array_for(node);
      case Kind::Object:
        return object_for(node);
      case Kind::Product: {
        std::uniform_int_distribution<std::size_t> pick(0, node.branches.size() - 1);
        return value_for(node.branches[pick(rng)]);
      }
    }
    return Json(nullptr);
  }

  Json sampled_value(const SchemaNode& node) {
    if (!node.examples || node.examples->examples.empty())
      throw AnalysisUnavailableError("sampled generation requires the examples facet");
    std::uniform_int_distribution<std::size_t> pick(0, node.examples->examples.size() - 1);
    return node.examples->examples[pick(rng)];
  }

  Json number_for(const SchemaNode& node) {
    if (cfg.mode == GeneratorConfig::Mode::Sampled) return sampled_value(node);
    if (node.integral)
      return Json(std::uniform_int_distribution<std::int64_t>(-1000000, 1000000)(rng));
    return Json(std::uniform_real_distribution<double>(-1e6, 1e6)(rng));
  }

  Json string_for(const SchemaNode& node) {
    if (cfg.mode == GeneratorConfig::Mode::Sampled) return sampled_value(node);
    return Json(random_string(rng));
  }

  Json array_for(const SchemaNode& node) {
    Json out = Json::array();
    if (node.tuple_mode) {
      for (const SchemaNode& item : node.items) out.push_back(value_for(item));
      return out;
    }
    if (node.items.at(0).kind == Kind::Any) return out;  // never observed non-empty
    std::uniform_int_distribution<std::size_t> len(0, cfg.max_array_length);
    std::size_t n = len(rng);
    for (std::size_t i = 0; i < n; ++i) out.push_back(value_for(node.items[0]));
    return out;
  }

  Json object_for(const SchemaNode& node) {
    Json out = Json::object();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& [key, child] : node.properties) {
      double p;
      if (cfg.inclusion_probability) {
        p = *cfg.inclusion_probability;
      } else if (node.attribute_counts && node.attribute_counts->total_objects > 0) {
        auto it = node.attribute_counts->counts.find(key);
        p = it == node.attribute_counts->counts.end()
                ? 0.0
                : double(it->second) / double(node.attribute_counts->total_objects);
      } else {
        p = 0.5;
      }
      if (unit(rng) < p) out[key] = value_for(child);
    }
    return out;
  }
};

}  // namespace

std::vector<Json> generate_documents(const SchemaNode& schema, const GeneratorConfig& cfg,
                                     std::size_t n) {
  std::vector<Json> docs;
  docs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto rng = seeded_rng(cfg.seed, 0x47454E00 + i);
    Generator gen{cfg, rng};
    docs.push_back(gen.value_for(schema));
  }
  return docs;
}

Json EvalReport::to_json() const {
  Json j = Json::object();
  if (validity_fraction) j["validity_fraction"] = *validity_fraction;
  j["total"] = total;
  j["valid"] = valid;
  j["invalid"] = invalid;
  if (!split.empty()) j["split"] = split;
  return j;
}

EvalReport evaluate_validity(const Json& emitted_schema, std::span<const Json> docs) {
  EvalReport report;
  report.total = docs.size();
  for (const Json& doc : docs) {
    if (validate(emitted_schema, doc).valid)
      ++report.valid;
    else
      ++report.invalid;
  }
  if (report.total > 0) report.validity_fraction = double(report.valid) / double(report.total);
  return report;
}

EvalReport overfit_split(std::span<const Json> corpus, const DiscoveryConfig& cfg,
                         double train_fraction, std::uint64_t seed) {
  if (corpus.size() < 10) throw std::invalid_argument("overfit_split: corpus too small");
  if (train_fraction <= 0.0 || train_fraction >= 1.0)
    throw std::invalid_argument("overfit_split: train fraction must be in (0, 1)");

  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto rng = seeded_rng(seed, 0x53504C49);
  std::shuffle(order.begin(), order.end(), rng);

  auto train_count = std::size_t(double(corpus.size()) * train_fraction);
  train_count = std::clamp<std::size_t>(train_count, 1, corpus.size() - 1);

  SchemaAccumulator acc(cfg);
  for (std::size_t i = 0; i < train_count; ++i) acc.add(corpus[order[i]]);
  Json schema = emit_json_schema(canonicalize(acc.take()), emit_options_for(cfg));

  std::vector<Json> test;
  test.reserve(corpus.size() - train_count);
  for (std::size_t i = train_count; i < corpus.size(); ++i) test.push_back(corpus[order[i]]);

  EvalReport report = evaluate_validity(schema, test);
  report.split = std::to_string(train_count) + " train / " + std::to_string(test.size()) + " test";
  return report;
}

}  // namespace jsonoid

#include "jsonoid/state.hpp"

#include <algorithm>
#include <stdexcept>

#include "jsonoid/base64.hpp"

namespace jsonoid {

namespace {

Json sketch_bytes_json(const std::vector<std::uint8_t>& bytes) {
  return Json(base64_encode(bytes));
}

Json bloom_to_json(const BloomFilter& f) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(8 + f.words().size() * 8);
  auto put = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes.push_back(std::uint8_t(v >> (8 * i)));
  };
  put(f.words().size());
  for (std::uint64_t w : f.words()) put(w);
  return Json{{"m", f.bits()}, {"k", f.hashes()}, {"payload", sketch_bytes_json(bytes)}};
}

BloomFilter bloom_from_json(const Json& j) {
  BloomFilter f(j.at("m").get<std::uint64_t>(), j.at("k").get<std::uint32_t>());
  auto bytes = base64_decode(j.at("payload").get_ref<const std::string&>());
  if (bytes.size() < 8) throw std::invalid_argument("state: truncated bloom payload");
  auto get = [&](std::size_t off) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(bytes[off + i]) << (8 * i);
    return v;
  };
  std::uint64_t count = get(0);
  if (bytes.size() != 8 + count * 8 || count != f.words().size())
    throw std::invalid_argument("state: bloom payload size mismatch");
  for (std::size_t i = 0; i < count; ++i) f.words()[i] = get(8 + i * 8);
  return f;
}

Json hll_to_json(const HyperLogLog& h) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(8 + h.registers().size());
  std::uint64_t n = h.registers().size();
  for (int i = 0; i < 8; ++i) bytes.push_back(std::uint8_t(n >> (8 * i)));
  bytes.insert(bytes.end(), h.registers().begin(), h.registers().end());
  return Json{{"p", h.precision()}, {"payload", sketch_bytes_json(bytes)}};
}

HyperLogLog hll_from_json(const Json& j) {
  HyperLogLog h(j.at("p").get<std::uint32_t>());
  auto bytes = base64_decode(j.at("payload").get_ref<const std::string&>());
  if (bytes.size() < 8) throw std::invalid_argument("state: truncated hll payload");
  std::uint64_t count = 0;
  for (int i = 0; i < 8; ++i) count |= std::uint64_t(bytes[i]) << (8 * i);
  if (bytes.size() != 8 + count || count != h.registers().size())
    throw std::invalid_argument("state: hll payload size mismatch");
  std::copy(bytes.begin() + 8, bytes.end(), h.registers().begin());
  return h;
}

Json node_to_json(const SchemaNode& node) {
  Json j{{"kind", kind_name(node.kind)}};
  switch (node.kind) {
    case Kind::Any:
    case Kind::Null:
    case Kind::Boolean:
      break;
    case Kind::Number: {
      j["integral"] = node.integral;
      if (node.range) j["range"] = Json{{"min", node.range->min}, {"max", node.range->max}};
      j["multiple"] = node.multiple ? Json(node.multiple->gcd) : Json(nullptr);
      if (node.histogram) {
        Json bins = Json::array();
        for (const auto& b : node.histogram->bins()) bins.push_back(Json{b.value, b.count});
        j["histogram"] = Json{{"max_bins", node.histogram->max_bins()},
                              {"total", node.histogram->total()},
                              {"bins", std::move(bins)}};
      }
      if (node.moments)
        j["moments"] = Json{{"n", node.moments->count()},
                            {"mean", node.moments->mean()},
                            {"m2", node.moments->m2()},
                            {"m3", node.moments->m3()},
                            {"m4", node.moments->m4()}};
      break;
    }
    case Kind::String: {
      if (node.string_length)
        j["length"] = Json{{"min", node.string_length->min}, {"max", node.string_length->max}};
      if (node.pattern)
        j["pattern"] = Json{{"prefix", node.pattern->prefix}, {"suffix", node.pattern->suffix}};
      if (node.format) {
        switch (node.format->state) {
          case FormatFacet::State::Named: j["format"] = format_name(node.format->format); break;
          case FormatFacet::State::Identity: j["format"] = "(identity)"; break;
          case FormatFacet::State::Plain: j["format"] = "(plain)"; break;
          case FormatFacet::State::Conflict: j["format"] = "(conflict)"; break;
        }
      }
      break;
    }
    case Kind::Array: {
      j["mode"] = node.tuple_mode ? "tuple" : "list";
      Json items = Json::array();
      for (const SchemaNode& item : node.items) items.push_back(node_to_json(item));
      j["items"] = std::move(items);
      if (node.array_length)
        j["length"] = Json{{"min", node.array_length->min}, {"max", node.array_length->max}};
      if (node.unique) j["unique"] = node.unique->is_unique;
      break;
    }
    case Kind::Object: {
      Json props = Json::object();
      for (const auto& [key, child] : node.properties) props[key] = node_to_json(child);
      j["properties"] = std::move(props);
      if (node.required) {
        Json keys = Json::array();
        for (const auto& k : node.required->keys) keys.push_back(k);
        j["required"] = std::move(keys);
      }
      if (node.attribute_counts)
        j["attribute_counts"] = Json{{"total", node.attribute_counts->total_objects},
                                     {"counts", node.attribute_counts->counts}};
      if (node.dependencies) {
        Json pairs = Json::array();
        for (const auto& [pair, n] : node.dependencies->pair_counts)
          pairs.push_back(Json{pair.first, pair.second, n});
        j["dependencies"] = Json{{"pairs", std::move(pairs)},
                                 {"singles", Json{{"total", node.dependencies->singles.total_objects},
                                                  {"counts", node.dependencies->singles.counts}}}};
      }
      break;
    }
    case Kind::Product: {
      Json branches = Json::array();
      for (const SchemaNode& branch : node.branches) branches.push_back(node_to_json(branch));
      j["branches"] = std::move(branches);
      break;
    }
  }
  if (node.examples) {
    Json values = Json::array();
    for (const Json& v : node.examples->examples) values.push_back(v);
    j["examples"] = Json{{"total", node.examples->total}, {"values", std::move(values)}};
  }
  if (node.bloom) j["bloom"] = bloom_to_json(*node.bloom);
  if (node.hll) j["hll"] = hll_to_json(*node.hll);
  return j;
}

Kind kind_from_name(std::string_view name) {
  for (Kind k : {Kind::Object, Kind::Array, Kind::String, Kind::Number, Kind::Boolean, Kind::Null,
                 Kind::Any, Kind::Product})
    if (kind_name(k) == name) return k;
  throw std::invalid_argument("state: unknown kind " + std::string(name));
}

SchemaNode node_from_json(const Json& j) {
  SchemaNode node;
  node.kind = kind_from_name(j.at("kind").get_ref<const std::string&>());
  switch (node.kind) {
    case Kind::Any:
    case Kind::Null:
    case Kind::Boolean:
      break;
    case Kind::Number: {
      node.integral = j.at("integral").get<bool>();
      if (auto it = j.find("range"); it != j.end())
        node.range = MaxMinFacet{MaxMinContext::NumberValue, it->at("min"), it->at("max")};
      if (auto it = j.find("multiple"); it != j.end() && !it->is_null())
        node.multiple = MultipleFacet{it->get<std::uint64_t>()};
      if (auto it = j.find("histogram"); it != j.end()) {
        std::vector<StreamingHistogram::Bin> bins;
        for (const Json& b : it->at("bins"))
          bins.push_back({b.at(0).get<double>(), b.at(1).get<std::uint64_t>()});
        node.histogram = StreamingHistogram::restore(it->at("max_bins").get<std::size_t>(),
                                                     it->at("total").get<std::uint64_t>(),
                                                     std::move(bins));
      }
      if (auto it = j.find("moments"); it != j.end())
        node.moments = MomentsAccumulator::restore(
            it->at("n").get<std::uint64_t>(), it->at("mean").get<double>(),
            it->at("m2").get<double>(), it->at("m3").get<double>(), it->at("m4").get<double>());
      break;
    }
    case Kind::String: {
      if (auto it = j.find("length"); it != j.end())
        node.string_length = MaxMinFacet{MaxMinContext::StringLength, it->at("min"), it->at("max")};
      if (auto it = j.find("pattern"); it != j.end())
        node.pattern = PatternFacet{it->at("prefix").get<std::string>(),
                                    it->at("suffix").get<std::string>()};
      if (auto it = j.find("format"); it != j.end()) {
        const auto& name = it->get_ref<const std::string&>();
        if (name == "(plain)")
          node.format = FormatFacet{FormatFacet::State::Plain, StringFormat::Uuid};
        else if (name == "(identity)")
          node.format = FormatFacet::identity();
        else if (name == "(conflict)")
          node.format = FormatFacet{FormatFacet::State::Conflict, StringFormat::Uuid};
        else if (auto f = format_from_name(name))
          node.format = FormatFacet{FormatFacet::State::Named, *f};
        else
          throw std::invalid_argument("state: unknown format " + name);
      }
      break;
    }
    case Kind::Array: {
      node.tuple_mode = j.at("mode").get_ref<const std::string&>() == "tuple";
      for (const Json& item : j.at("items")) node.items.push_back(node_from_json(item));
      if (auto it = j.find("length"); it != j.end())
        node.array_length = MaxMinFacet{MaxMinContext::ArrayLength, it->at("min"), it->at("max")};
      if (auto it = j.find("unique"); it != j.end()) node.unique = UniqueFacet{it->get<bool>()};
      break;
    }
    case Kind::Object: {
      const Json& props = j.at("properties");
      for (auto it = props.begin(); it != props.end(); ++it)
        node.properties.emplace_back(it.key(), node_from_json(it.value()));
      std::sort(node.properties.begin(), node.properties.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      if (auto it = j.find("required"); it != j.end()) {
        RequiredFacet r;
        for (const Json& k : *it) r.keys.insert(k.get<std::string>());
        node.required = std::move(r);
      }
      if (auto it = j.find("attribute_counts"); it != j.end()) {
        AttributeCountsFacet c;
        c.total_objects = it->at("total").get<std::uint64_t>();
        for (auto kv = it->at("counts").begin(); kv != it->at("counts").end(); ++kv)
          c.counts[kv.key()] = kv.value().get<std::uint64_t>();
        node.attribute_counts = std::move(c);
      }
      if (auto it = j.find("dependencies"); it != j.end()) {
        DependenciesFacet d;
        for (const Json& p : it->at("pairs"))
          d.pair_counts[{p.at(0).get<std::string>(), p.at(1).get<std::string>()}] =
              p.at(2).get<std::uint64_t>();
        d.singles.total_objects = it->at("singles").at("total").get<std::uint64_t>();
        for (auto kv = it->at("singles").at("counts").begin();
             kv != it->at("singles").at("counts").end(); ++kv)
          d.singles.counts[kv.key()] = kv.value().get<std::uint64_t>();
        node.dependencies = std::move(d);
      }
      break;
    }
    case Kind::Product: {
      for (const Json& branch : j.at("branches")) node.branches.push_back(node_from_json(branch));
      break;
    }
  }
  if (auto it = j.find("examples"); it != j.end()) {
    ExamplesFacet e;
    e.total = it->at("total").get<std::uint64_t>();
    for (const Json& v : it->at("values")) e.examples.push_back(v);
    node.examples = std::move(e);
  }
  if (auto it = j.find("bloom"); it != j.end()) node.bloom = bloom_from_json(*it);
  if (auto it = j.find("hll"); it != j.end()) node.hll = hll_from_json(*it);
  return node;
}

}  // namespace

Json config_to_json(const DiscoveryConfig& cfg) {
  return Json{{"monoids", cfg.facets.names()},
              {"equivalence", cfg.equivalence == Equivalence::Kind ? "kind" : "label"},
              {"reservoir_capacity", cfg.reservoir_capacity},
              {"histogram_max_bins", cfg.histogram_max_bins},
              {"bloom_bits", cfg.bloom_bits},
              {"bloom_hashes", cfg.bloom_hashes},
              {"hll_precision", cfg.hll_precision},
              {"pattern_min_length", cfg.pattern_min_length},
              {"seed", cfg.rng_seed}};
}

DiscoveryConfig config_from_json(const Json& j) {
  DiscoveryConfig cfg;
  FacetSet facets;
  for (const Json& name : j.at("monoids")) {
    auto f = facet_from_name(name.get_ref<const std::string&>());
    if (!f) throw std::invalid_argument("state: unknown facet " + name.get<std::string>());
    facets = facets.with(*f);
  }
  cfg.facets = facets;
  cfg.equivalence = j.at("equivalence").get_ref<const std::string&>() == "label"
                        ? Equivalence::Label
                        : Equivalence::Kind;
  cfg.reservoir_capacity = j.at("reservoir_capacity").get<std::size_t>();
  cfg.histogram_max_bins = j.at("histogram_max_bins").get<std::size_t>();
  cfg.bloom_bits = j.at("bloom_bits").get<std::uint64_t>();
  cfg.bloom_hashes = j.at("bloom_hashes").get<std::uint32_t>();
  cfg.hll_precision = j.at("hll_precision").get<std::uint32_t>();
  cfg.pattern_min_length = j.at("pattern_min_length").get<std::size_t>();
  cfg.rng_seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

std::string save_state(const DiscoveryState& state) {
  Json body{{"total_docs", state.total_docs},
            {"config", config_to_json(state.config)},
            {"schema", node_to_json(state.schema)}};
  return std::string(kStateMagic) + "\n" + body.dump() + "\n";
}

DiscoveryState load_state(std::string_view text) {
  std::size_t eol = text.find('\n');
  if (eol == std::string_view::npos || text.substr(0, eol) != kStateMagic)
    throw std::invalid_argument("state: missing JZST1 header");
  Json body = Json::parse(text.substr(eol + 1));
  DiscoveryState state;
  state.total_docs = body.at("total_docs").get<std::uint64_t>();
  state.config = config_from_json(body.at("config"));
  state.schema = node_from_json(body.at("schema"));
  return state;
}

}  // namespace jsonoid

#include "jsonoid/discovery.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "jsonoid/emit.hpp"

namespace jsonoid {

std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream_a, std::uint64_t stream_b) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32),
                    std::uint32_t(stream_a), std::uint32_t(stream_a >> 32),
                    std::uint32_t(stream_b), std::uint32_t(stream_b >> 32)};
  return std::mt19937_64(seq);
}

namespace {

std::string sketch_bytes(const Json& value) {
  return value.is_string() ? value.get<std::string>() : canonical_number_text(value);
}

void init_value_facets(SchemaNode& node, const Json& value, const DiscoveryConfig& cfg) {
  if (cfg.facets.contains(Facet::Examples)) node.examples = ExamplesFacet::of(value);
  if (cfg.facets.contains(Facet::Bloom)) {
    node.bloom = BloomFilter(cfg.bloom_bits, cfg.bloom_hashes);
    node.bloom->insert(sketch_bytes(value));
  }
  if (cfg.facets.contains(Facet::Hll)) {
    node.hll = HyperLogLog(cfg.hll_precision);
    node.hll->add(sketch_bytes(value));
  }
}

SchemaNode discover_value(const Json& doc, const DiscoveryConfig& cfg, std::size_t depth) {
  if (depth > kMaxNestingDepth) throw std::runtime_error("document nesting depth exceeds limit");

  SchemaNode node;
  switch (doc.type()) {
    case Json::value_t::null:
      node.kind = Kind::Null;
      break;
    case Json::value_t::boolean:
      node.kind = Kind::Boolean;
      break;
    case Json::value_t::number_integer:
    case Json::value_t::number_unsigned:
    case Json::value_t::number_float: {
      node.kind = Kind::Number;
      node.integral = is_integral_number(doc);
      if (cfg.facets.contains(Facet::MaxMin))
        node.range = MaxMinFacet::of(MaxMinContext::NumberValue, doc);
      if (cfg.facets.contains(Facet::Multiple)) node.multiple = MultipleFacet::of(doc);
      if (cfg.facets.contains(Facet::Histogram)) {
        node.histogram = StreamingHistogram(cfg.histogram_max_bins);
        node.histogram->add(doc.get<double>());
      }
      if (cfg.facets.contains(Facet::Stats))
        node.moments = MomentsAccumulator::of(doc.get<double>());
      init_value_facets(node, doc, cfg);
      break;
    }
    case Json::value_t::string: {
      node.kind = Kind::String;
      const auto& s = doc.get_ref<const std::string&>();
      if (cfg.facets.contains(Facet::MaxMin))
        node.string_length = MaxMinFacet::of(MaxMinContext::StringLength, Json(utf8_length(s)));
      if (cfg.facets.contains(Facet::Pattern)) node.pattern = PatternFacet::of(s);
      if (cfg.facets.contains(Facet::Format)) node.format = FormatFacet::of(s);
      init_value_facets(node, doc, cfg);
      break;
    }
    case Json::value_t::array: {
      node.kind = Kind::Array;
      if (doc.empty()) {
        node.tuple_mode = false;
        node.items.emplace_back();  // kind Any
      } else {
        node.tuple_mode = true;
        node.items.reserve(doc.size());
        for (const auto& el : doc) node.items.push_back(discover_value(el, cfg, depth + 1));
      }
      if (cfg.facets.contains(Facet::MaxMin))
        node.array_length = MaxMinFacet::of(MaxMinContext::ArrayLength, Json(doc.size()));
      if (cfg.facets.contains(Facet::Unique)) node.unique = UniqueFacet::of(doc);
      break;
    }
    case Json::value_t::object: {
      node.kind = Kind::Object;
      node.properties.reserve(doc.size());
      for (auto it = doc.begin(); it != doc.end(); ++it)
        node.properties.emplace_back(it.key(), discover_value(it.value(), cfg, depth + 1));
      std::sort(node.properties.begin(), node.properties.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      if (cfg.facets.contains(Facet::Required)) node.required = RequiredFacet::of(doc);
      if (cfg.facets.contains(Facet::AttributeCounts))
        node.attribute_counts = AttributeCountsFacet::of(doc);
      if (cfg.facets.contains(Facet::Dependencies)) node.dependencies = DependenciesFacet::of(doc);
      break;
    }
    default:
      throw std::runtime_error("unsupported JSON value type");
  }
  return node;
}

bool equivalent(const SchemaNode& a, const SchemaNode& b, Equivalence eq) {
  if (a.kind != b.kind) return false;
  if (eq == Equivalence::Label && a.kind == Kind::Object)
    return a.property_keys() == b.property_keys();
  return true;
}

template <class T, class F>
std::optional<T> combine_opt(std::optional<T> a, std::optional<T> b, F&& f) {
  if (a.has_value() != b.has_value())
    throw std::invalid_argument("merge: facet configuration mismatch");
  if (!a) return std::nullopt;
  return f(std::move(*a), std::move(*b));
}

struct MergeContext {
  const DiscoveryConfig& cfg;
  std::mt19937_64& rng;
};

SchemaNode merge_nodes(SchemaNode a, SchemaNode b, MergeContext& ctx);

// Positional schemas of a tuple-mode side, or the single item of a list
// side (skipping the never-observed Any placeholder).
void collect_item_schemas(SchemaNode& array_node, std::vector<SchemaNode>& out) {
  for (SchemaNode& item : array_node.items)
    if (item.kind != Kind::Any) out.push_back(std::move(item));
}

void merge_array_items(SchemaNode& a, SchemaNode& b, MergeContext& ctx) {
  const bool a_any = !a.tuple_mode && a.items.size() == 1 && a.items[0].kind == Kind::Any;
  const bool b_any = !b.tuple_mode && b.items.size() == 1 && b.items[0].kind == Kind::Any;
  if (b_any) return;
  if (a_any) {
    a.tuple_mode = b.tuple_mode;
    a.items = std::move(b.items);
    return;
  }
  if (a.tuple_mode && b.tuple_mode && a.items.size() == b.items.size()) {
    for (std::size_t i = 0; i < a.items.size(); ++i)
      a.items[i] = merge_nodes(std::move(a.items[i]), std::move(b.items[i]), ctx);
    return;
  }
  // Arity mismatch (or an already-collapsed side): fold every positional
  // schema from both sides into a single item schema.
  std::vector<SchemaNode> parts;
  parts.reserve(a.items.size() + b.items.size());
  collect_item_schemas(a, parts);
  collect_item_schemas(b, parts);
  SchemaNode item;
  for (SchemaNode& part : parts) item = merge_nodes(std::move(item), std::move(part), ctx);
  a.tuple_mode = false;
  a.items.clear();
  a.items.push_back(std::move(item));
}

void merge_properties(SchemaNode& a, SchemaNode& b, MergeContext& ctx) {
  std::vector<std::pair<std::string, SchemaNode>> merged;
  merged.reserve(a.properties.size() + b.properties.size());
  auto ia = a.properties.begin(), ib = b.properties.begin();
  while (ia != a.properties.end() || ib != b.properties.end()) {
    if (ib == b.properties.end() || (ia != a.properties.end() && ia->first < ib->first)) {
      merged.push_back(std::move(*ia++));
    } else if (ia == a.properties.end() || ib->first < ia->first) {
      merged.push_back(std::move(*ib++));
    } else {
      merged.emplace_back(ia->first,
                          merge_nodes(std::move(ia->second), std::move(ib->second), ctx));
      ++ia;
      ++ib;
    }
  }
  a.properties = std::move(merged);
}

SchemaNode combine_same_kind(SchemaNode a, SchemaNode b, MergeContext& ctx) {
  switch (a.kind) {
    case Kind::Null:
    case Kind::Boolean:
      break;
    case Kind::Number:
      a.integral = a.integral && b.integral;
      a.range = combine_opt(std::move(a.range), std::move(b.range),
                            [](auto x, auto y) { return combine(std::move(x), y); });
      // Absence is absorbing here: one non-integer observation disables
      // multipleOf for the merged node.
      if (a.multiple && b.multiple)
        a.multiple = combine(*a.multiple, *b.multiple);
      else
        a.multiple = std::nullopt;
      a.histogram = combine_opt(std::move(a.histogram), std::move(b.histogram),
                                [](auto x, auto y) { return combine(std::move(x), y); });
      a.moments = combine_opt(std::move(a.moments), std::move(b.moments),
                              [](auto x, auto y) { return combine(x, y); });
      a.examples = combine_opt(std::move(a.examples), std::move(b.examples), [&](auto x, auto y) {
        return combine(x, y, ctx.cfg.reservoir_capacity, ctx.rng);
      });
      a.bloom = combine_opt(std::move(a.bloom), std::move(b.bloom),
                            [](auto x, auto y) { return combine(std::move(x), y); });
      a.hll = combine_opt(std::move(a.hll), std::move(b.hll),
                          [](auto x, auto y) { return combine(std::move(x), y); });
      break;
    case Kind::String:
      a.string_length = combine_opt(std::move(a.string_length), std::move(b.string_length),
                                    [](auto x, auto y) { return combine(std::move(x), y); });
      a.pattern = combine_opt(std::move(a.pattern), std::move(b.pattern),
                              [](auto x, auto y) { return combine(x, y); });
      a.format = combine_opt(std::move(a.format), std::move(b.format),
                             [](auto x, auto y) { return combine(x, y); });
      a.examples = combine_opt(std::move(a.examples), std::move(b.examples), [&](auto x, auto y) {
        return combine(x, y, ctx.cfg.reservoir_capacity, ctx.rng);
      });
      a.bloom = combine_opt(std::move(a.bloom), std::move(b.bloom),
                            [](auto x, auto y) { return combine(std::move(x), y); });
      a.hll = combine_opt(std::move(a.hll), std::move(b.hll),
                          [](auto x, auto y) { return combine(std::move(x), y); });
      break;
    case Kind::Array:
      merge_array_items(a, b, ctx);
      a.array_length = combine_opt(std::move(a.array_length), std::move(b.array_length),
                                   [](auto x, auto y) { return combine(std::move(x), y); });
      a.unique = combine_opt(std::move(a.unique), std::move(b.unique),
                             [](auto x, auto y) { return combine(x, y); });
      break;
    case Kind::Object:
      merge_properties(a, b, ctx);
      a.required = combine_opt(std::move(a.required), std::move(b.required),
                               [](auto x, auto y) { return combine(x, y); });
      a.attribute_counts =
          combine_opt(std::move(a.attribute_counts), std::move(b.attribute_counts),
                      [](auto x, auto y) { return combine(std::move(x), y); });
      a.dependencies = combine_opt(std::move(a.dependencies), std::move(b.dependencies),
                                   [](auto x, auto y) { return combine(std::move(x), y); });
      break;
    case Kind::Any:
    case Kind::Product:
      throw std::logic_error("combine_same_kind: unexpected kind");
  }
  return a;
}

void insert_branch(SchemaNode& product, SchemaNode branch, MergeContext& ctx) {
  for (SchemaNode& existing : product.branches) {
    if (equivalent(existing, branch, ctx.cfg.equivalence)) {
      existing = combine_same_kind(std::move(existing), std::move(branch), ctx);
      return;
    }
  }
  product.branches.push_back(std::move(branch));
}

SchemaNode merge_nodes(SchemaNode a, SchemaNode b, MergeContext& ctx) {
  if (a.kind == Kind::Any) return b;
  if (b.kind == Kind::Any) return a;

  const bool a_prod = a.kind == Kind::Product;
  const bool b_prod = b.kind == Kind::Product;
  if (a_prod && b_prod) {
    for (SchemaNode& br : b.branches) insert_branch(a, std::move(br), ctx);
    return a;
  }
  if (a_prod) {
    insert_branch(a, std::move(b), ctx);
    return a;
  }
  if (b_prod) {
    insert_branch(b, std::move(a), ctx);
    return b;
  }
  if (equivalent(a, b, ctx.cfg.equivalence))
    return combine_same_kind(std::move(a), std::move(b), ctx);

  SchemaNode product;
  product.kind = Kind::Product;
  product.branches.push_back(std::move(a));
  product.branches.push_back(std::move(b));
  return product;
}

}  // namespace

SchemaNode discover_document(const Json& doc, const DiscoveryConfig& cfg) {
  return discover_value(doc, cfg, 0);
}

SchemaNode merge_schemas(SchemaNode a, SchemaNode b, const DiscoveryConfig& cfg,
                         std::mt19937_64& rng) {
  MergeContext ctx{cfg, rng};
  return merge_nodes(std::move(a), std::move(b), ctx);
}

SchemaAccumulator::SchemaAccumulator(DiscoveryConfig cfg, std::uint64_t rng_stream)
    : cfg_(std::move(cfg)), rng_(seeded_rng(cfg_.rng_seed, rng_stream)) {}

void SchemaAccumulator::add(const Json& doc) {
  acc_ = merge_schemas(std::move(acc_), discover_document(doc, cfg_), cfg_, rng_);
  ++count_;
}

void SchemaAccumulator::merge_in(SchemaNode other) {
  acc_ = merge_schemas(std::move(acc_), std::move(other), cfg_, rng_);
}

SchemaNode fold_streaming(const DocumentPull& next, const DiscoveryConfig& cfg) {
  SchemaAccumulator acc(cfg);
  while (auto doc = next()) acc.add(*doc);
  return acc.take();
}

SchemaNode fold_streaming(std::span<const Json> docs, const DiscoveryConfig& cfg) {
  SchemaAccumulator acc(cfg);
  for (const Json& doc : docs) acc.add(doc);
  return acc.take();
}

SchemaNode fold_tree(std::span<const std::vector<Json>> batches, const DiscoveryConfig& cfg,
                     std::size_t workers) {
  if (workers == 0) throw std::invalid_argument("fold_tree: workers must be positive");
  if (batches.empty()) return SchemaNode{};

  std::vector<SchemaNode> partials(batches.size());
  std::vector<std::exception_ptr> errors(batches.size());
  std::size_t next_batch = 0;
  std::mutex gate;

  auto run = [&](std::size_t batch_index) {
    try {
      SchemaAccumulator acc(cfg, batch_index + 1);
      for (const Json& doc : batches[batch_index]) acc.add(doc);
      partials[batch_index] = acc.take();
    } catch (...) {
      errors[batch_index] = std::current_exception();
    }
  };

  std::vector<std::thread> pool;
  std::size_t nthreads = std::min(workers, batches.size());
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t mine;
        {
          std::lock_guard lock(gate);
          if (next_batch >= batches.size()) return;
          mine = next_batch++;
        }
        run(mine);
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);

  // Pairwise reduction rounds; each merge draws from its own seeded rng so
  // the schedule is reproducible for a given batch count.
  std::uint64_t round = 0;
  while (partials.size() > 1) {
    std::vector<SchemaNode> reduced;
    reduced.reserve((partials.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < partials.size(); i += 2) {
      auto rng = seeded_rng(cfg.rng_seed, 0x52454455 + round, i / 2);
      reduced.push_back(
          merge_schemas(std::move(partials[i]), std::move(partials[i + 1]), cfg, rng));
    }
    if (partials.size() % 2 == 1) reduced.push_back(std::move(partials.back()));
    partials = std::move(reduced);
    ++round;
  }
  return std::move(partials.front());
}

namespace {

void canonicalize_in_place(SchemaNode& node) {
  std::sort(node.properties.begin(), node.properties.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [_, child] : node.properties) canonicalize_in_place(child);
  for (auto& item : node.items) canonicalize_in_place(item);
  for (auto& branch : node.branches) canonicalize_in_place(branch);
  if (node.kind == Kind::Product) {
    std::vector<std::pair<std::string, std::size_t>> order;
    order.reserve(node.branches.size());
    for (std::size_t i = 0; i < node.branches.size(); ++i) {
      std::string key = std::string(kind_name(node.branches[i].kind));
      key += '\n';
      key += emit_json_schema(node.branches[i], EmitOptions{}).dump();
      order.emplace_back(std::move(key), i);
    }
    std::sort(order.begin(), order.end());
    std::vector<SchemaNode> sorted;
    sorted.reserve(node.branches.size());
    for (const auto& [_, i] : order) sorted.push_back(std::move(node.branches[i]));
    node.branches = std::move(sorted);
  }
}

}  // namespace

SchemaNode canonicalize(SchemaNode node) {
  canonicalize_in_place(node);
  return node;
}

}  // namespace jsonoid

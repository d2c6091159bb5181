#include <sys/resource.h>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "jsonoid/analysis.hpp"
#include "jsonoid/discovery.hpp"
#include "jsonoid/emit.hpp"
#include "jsonoid/evalgen.hpp"
#include "jsonoid/ingest.hpp"
#include "jsonoid/state.hpp"
#include "jsonoid/validate.hpp"

namespace {

using namespace jsonoid;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitAnalysisUnavailable = 3;

long max_rss_kb() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return usage.ru_maxrss;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

struct IngestStats {
  std::uint64_t documents = 0;
  std::uint64_t failures = 0;
  std::uint64_t warnings = 0;
};

// Streams every document from the given files (or stdin when empty)
// through `fn`; per-line diagnostics go to stderr as they happen.
IngestStats for_each_document(const std::vector<std::string>& paths, InputFormat format,
                              const std::function<void(Json)>& fn) {
  IngestStats stats;
  auto drain = [&](std::istream& in, const std::string& name) {
    DocumentStream stream(in, format);
    while (auto doc = stream.next()) fn(std::move(*doc));
    for (const auto& diag : stream.diagnostics())
      std::cerr << name << ":" << diag.line << ": " << diag.message << "\n";
    stats.documents += stream.documents_yielded();
    stats.failures += stream.parse_failures();
    stats.warnings += stream.warning_count();
  };
  if (paths.empty()) {
    drain(std::cin, "<stdin>");
  } else {
    for (const auto& path : paths) {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw std::runtime_error("cannot open " + path);
      drain(in, path);
    }
  }
  return stats;
}

std::vector<Json> collect_documents(const std::vector<std::string>& paths, InputFormat format,
                                    IngestStats& stats) {
  std::vector<Json> docs;
  stats = for_each_document(paths, format, [&](Json doc) { docs.push_back(std::move(doc)); });
  return docs;
}

struct CommonOptions {
  std::vector<std::string> inputs;
  std::string format = "ndjson";
  std::string monoids = "all";
  std::string equivalence = "kind";
  std::uint64_t seed = 0;
  std::size_t reservoir_capacity = 100;
  std::size_t histogram_bins = 100;
  std::uint64_t bloom_bits = 65536;
  std::uint32_t bloom_hashes = 7;
  std::uint32_t hll_precision = 12;
  std::size_t pattern_min_length = 3;

  InputFormat input_format() const {
    if (format == "ndjson") return InputFormat::Ndjson;
    if (format == "json-array") return InputFormat::JsonArray;
    throw CLI::ValidationError("--format must be ndjson or json-array");
  }

  DiscoveryConfig config() const {
    DiscoveryConfig cfg;
    cfg.facets = FacetSet::parse(monoids);
    cfg.equivalence = equivalence == "label" ? Equivalence::Label : Equivalence::Kind;
    cfg.reservoir_capacity = reservoir_capacity;
    cfg.histogram_max_bins = histogram_bins;
    cfg.bloom_bits = bloom_bits;
    cfg.bloom_hashes = bloom_hashes;
    cfg.hll_precision = hll_precision;
    cfg.pattern_min_length = pattern_min_length;
    cfg.rng_seed = seed;
    return cfg;
  }
};

void add_config_flags(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--monoids", opts.monoids,
                  "min | simple | all | comma-separated facet names");
  cmd->add_option("--equivalence", opts.equivalence, "kind | label")
      ->check(CLI::IsMember({"kind", "label"}));
  cmd->add_option("--seed", opts.seed, "RNG seed for randomized facets");
  cmd->add_option("--reservoir-capacity", opts.reservoir_capacity, "examples kept per value node");
  cmd->add_option("--histogram-bins", opts.histogram_bins, "max streaming histogram bins");
  cmd->add_option("--bloom-bits", opts.bloom_bits, "bloom filter size in bits");
  cmd->add_option("--bloom-hashes", opts.bloom_hashes, "bloom filter hash count");
  cmd->add_option("--hll-precision", opts.hll_precision, "HLL precision p (2^p registers)");
  cmd->add_option("--pattern-min-length", opts.pattern_min_length,
                  "shortest prefix/suffix emitted as a pattern");
}

void add_input_flags(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("inputs", opts.inputs, "input files (stdin when omitted)");
  cmd->add_option("--format", opts.format, "ndjson | json-array")
      ->check(CLI::IsMember({"ndjson", "json-array"}));
}

int cmd_discover(const CommonOptions& opts, const std::string& mode, std::size_t workers,
                 const std::string& out_path, const std::string& state_path, bool open) {
  DiscoveryConfig cfg = opts.config();
  auto started = std::chrono::steady_clock::now();

  SchemaNode schema;
  std::uint64_t count = 0;
  IngestStats stats;
  if (mode == "streaming") {
    SchemaAccumulator acc(cfg);
    stats = for_each_document(opts.inputs, opts.input_format(),
                              [&](Json doc) { acc.add(doc); });
    count = acc.document_count();
    schema = acc.take();
  } else {
    std::size_t n = workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;
    std::vector<Json> docs = collect_documents(opts.inputs, opts.input_format(), stats);
    count = docs.size();
    auto batches = partition(std::move(docs), n);
    schema = fold_tree(batches, cfg, n);
  }

  if (count == 0 && stats.failures > 0) {
    std::cerr << "error: no documents parsed (" << stats.failures << " failures)\n";
    return kExitData;
  }

  schema = canonicalize(std::move(schema));

  EmitOptions options = emit_options_for(cfg);
  options.closed = !open;
  std::string emitted = schema_to_string(emit_json_schema(schema, options));
  if (out_path.empty())
    std::cout << emitted;
  else
    write_file(out_path, emitted);

  if (!state_path.empty())
    write_file(state_path, save_state(DiscoveryState{std::move(schema), count, cfg}));

  std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
  Json line{{"docs", count},
            {"parse_failures", stats.failures},
            {"runtime_s", elapsed.count()},
            {"docs_per_sec", elapsed.count() > 0 ? double(count) / elapsed.count() : 0.0},
            {"monoids", opts.monoids},
            {"mode", mode},
            {"max_rss_kb", max_rss_kb()}};
  std::cerr << line.dump() << "\n";
  return kExitOk;
}

int cmd_validate(const CommonOptions& opts, const std::string& schema_path) {
  Json schema = Json::parse(read_file(schema_path));
  std::uint64_t index = 0, valid = 0;
  for_each_document(opts.inputs, opts.input_format(), [&](Json doc) {
    ValidationOutcome outcome = validate(schema, doc);
    Json line{{"index", index}, {"valid", outcome.valid}};
    if (!outcome.valid) {
      Json violations = Json::array();
      for (const auto& v : outcome.violations)
        violations.push_back(Json{{"path", v.path}, {"keyword", v.keyword}, {"message", v.message}});
      line["violations"] = std::move(violations);
    }
    std::cout << line.dump() << "\n";
    if (outcome.valid) ++valid;
    ++index;
  });
  Json summary{{"total", index}, {"valid", valid}};
  if (index > 0) summary["fraction"] = double(valid) / double(index);
  std::cout << summary.dump() << "\n";
  return kExitOk;
}

int cmd_constraints(const std::string& state_path, double pk_tolerance) {
  DiscoveryState state = load_state(read_file(state_path));
  for (const auto& s : suggest_primary_keys(state.schema, state.total_docs, pk_tolerance))
    std::cout << s.to_json().dump() << "\n";
  for (const auto& s : suggest_foreign_keys(state.schema))
    std::cout << s.to_json().dump() << "\n";
  return kExitOk;
}

int cmd_outliers(const CommonOptions& opts, const std::string& state_path, double z_max,
                 double f_min) {
  DiscoveryState state = load_state(read_file(state_path));
  OutlierThresholds thresholds{z_max, f_min};
  std::uint64_t index = 0;
  for_each_document(opts.inputs, opts.input_format(), [&](Json doc) {
    for (auto& report : detect_outliers(state.schema, doc, thresholds)) {
      report.detail["doc"] = index;
      std::cout << report.to_json().dump() << "\n";
    }
    ++index;
  });
  return kExitOk;
}

int cmd_generate(const std::string& state_path, const std::string& mode, std::size_t n,
                 std::uint64_t seed, std::size_t max_array_length, double inclusion_probability,
                 bool inclusion_set, const std::string& filter_schema_path) {
  DiscoveryState state = load_state(read_file(state_path));
  GeneratorConfig cfg;
  cfg.mode = mode == "sampled" ? GeneratorConfig::Mode::Sampled : GeneratorConfig::Mode::Random;
  cfg.seed = seed;
  cfg.max_array_length = max_array_length;
  if (inclusion_set) cfg.inclusion_probability = inclusion_probability;

  std::optional<Json> filter;
  if (!filter_schema_path.empty()) filter = Json::parse(read_file(filter_schema_path));

  for (const Json& doc : generate_documents(state.schema, cfg, n)) {
    if (filter && validate(*filter, doc).valid) continue;  // keep non-conforming only
    std::cout << doc.dump() << "\n";
  }
  return kExitOk;
}

int cmd_evaluate(const CommonOptions& opts, double split) {
  IngestStats stats;
  std::vector<Json> corpus = collect_documents(opts.inputs, opts.input_format(), stats);
  if (corpus.empty()) {
    std::cerr << "error: no documents parsed\n";
    return kExitData;
  }
  EvalReport report = overfit_split(corpus, opts.config(), split, opts.seed);
  Json out = report.to_json();
  if (report.validity_fraction) out["overfit"] = 1.0 - *report.validity_fraction;
  std::cout << out.dump() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monoid-based JSON schema discovery and profiling"};
  app.require_subcommand(1);

  CommonOptions opts;

  auto* discover = app.add_subcommand("discover", "discover a schema from documents");
  std::string mode = "streaming";
  std::size_t workers = 0;
  std::string out_path, state_path;
  bool open = false;
  add_input_flags(discover, opts);
  add_config_flags(discover, opts);
  discover->add_option("--mode", mode, "streaming | tree")
      ->check(CLI::IsMember({"streaming", "tree"}));
  discover->add_option("--workers", workers, "tree-mode workers (0 = all cores)");
  discover->add_option("--out", out_path, "write the emitted schema here (stdout otherwise)");
  discover->add_option("--save-state", state_path, "write reusable discovery state (JZST1)");
  discover->add_flag("--open", open, "omit additionalProperties:false from objects");

  auto* validate_cmd = app.add_subcommand("validate", "validate documents against a schema");
  std::string schema_path;
  add_input_flags(validate_cmd, opts);
  validate_cmd->add_option("--schema", schema_path, "emitted schema file")->required();

  auto* constraints = app.add_subcommand("constraints", "suggest primary/foreign keys");
  std::string constraints_state;
  double pk_tolerance = 2.0;
  constraints->add_option("--state", constraints_state, "state file from --save-state")
      ->required();
  constraints->add_option("--pk-tolerance", pk_tolerance,
                          "primary key tolerance in HLL standard errors");

  auto* outliers = app.add_subcommand("outliers", "report per-value outliers in documents");
  std::string outliers_state;
  double z_max = 3.0, f_min = 0.01;
  add_input_flags(outliers, opts);
  outliers->add_option("--state", outliers_state, "state file from --save-state")->required();
  outliers->add_option("--z-max", z_max, "z-score threshold for numeric outliers");
  outliers->add_option("--f-min", f_min, "frequency threshold for rare attributes");

  auto* generate = app.add_subcommand("generate", "generate documents from a schema state");
  std::string generate_state, generate_mode = "random", filter_schema;
  std::size_t n = 100, max_array_length = 8;
  std::uint64_t generate_seed = 0;
  double inclusion_probability = 0.5;
  generate->add_option("--state", generate_state, "state file from --save-state")->required();
  generate->add_option("--mode", generate_mode, "sampled | random")
      ->check(CLI::IsMember({"sampled", "random"}));
  generate->add_option("--n", n, "number of documents");
  generate->add_option("--seed", generate_seed, "generation seed");
  generate->add_option("--max-array-length", max_array_length, "max generated array length");
  auto* inclusion_opt = generate->add_option("--inclusion-probability", inclusion_probability,
                                             "fixed property inclusion probability");
  generate->add_option("--filter-schema", filter_schema,
                       "keep only documents NOT valid against this schema");

  auto* evaluate = app.add_subcommand("evaluate", "overfit measurement via train/test split");
  double split = 0.9;
  add_input_flags(evaluate, opts);
  add_config_flags(evaluate, opts);  // --seed drives both the split shuffle and discovery
  evaluate->add_option("--split", split, "train fraction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (discover->parsed())
      return cmd_discover(opts, mode, workers, out_path, state_path, open);
    if (validate_cmd->parsed()) return cmd_validate(opts, schema_path);
    if (constraints->parsed()) return cmd_constraints(constraints_state, pk_tolerance);
    if (outliers->parsed()) return cmd_outliers(opts, outliers_state, z_max, f_min);
    if (generate->parsed())
      return cmd_generate(generate_state, generate_mode, n, generate_seed, max_array_length,
                          inclusion_probability, inclusion_opt->count() > 0, filter_schema);
    if (evaluate->parsed()) return cmd_evaluate(opts, split);
  } catch (const AnalysisUnavailableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAnalysisUnavailable;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "jsonoid/json.hpp"
#include "corpus_gen.hpp"

namespace {

using jsonoid::Json;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args, const std::string& redirect = "2>/dev/null") {
  std::string cmd = std::string(JSONOID_CLI_PATH) + " " + args + " " + redirect;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path temp_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() / "jsonoid-cli-tests";
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_ndjson(const std::string& name, const std::vector<Json>& docs) {
  auto path = temp_dir() / name;
  std::ofstream out(path);
  for (const auto& d : docs) out << d.dump() << "\n";
  return path.string();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    if (eol > pos) lines.push_back(text.substr(pos, eol - pos));
    pos = eol + 1;
  }
  return lines;
}

constexpr const char* kDeterministicFacets =
    "objecttypes,arraytype,maxmin,multiple,pattern,format,required,dependencies,unique,"
    "attributecounts,bloom,hll";

}  // namespace

TEST_CASE("cli: min discovery emits a structural-only schema") {
  auto path = write_ndjson("min.ndjson", {Json::parse(R"({"a":"x","n":3})"),
                                          Json::parse(R"({"a":"y","n":4})")});
  auto result = run("discover --mode streaming --monoids min " + path);
  REQUIRE(result.exit_code == 0);
  Json schema = Json::parse(result.out);
  CHECK(schema.at("type") == Json("object"));
  CHECK(!schema.contains("required"));
  CHECK(!schema.at("properties").at("a").contains("minLength"));
  CHECK(!schema.at("properties").at("n").contains("minimum"));
}

TEST_CASE("cli: tree mode matches streaming for deterministic facets") {
  auto docs = corpus::random_corpus(301, 400);
  auto path = write_ndjson("tree.ndjson", docs);
  std::string flags = std::string(" --monoids ") + kDeterministicFacets + " " + path;
  auto streaming = run("discover --mode streaming" + flags);
  auto tree = run("discover --mode tree --workers 4" + flags);
  REQUIRE(streaming.exit_code == 0);
  REQUIRE(tree.exit_code == 0);
  CHECK(streaming.out == tree.out);
}

TEST_CASE("cli: repeated seeded discovery is byte-identical") {
  auto docs = corpus::random_corpus(302, 150);
  auto path = write_ndjson("det.ndjson", docs);
  auto first = run("discover --monoids all --seed 7 " + path);
  auto second = run("discover --monoids all --seed 7 " + path);
  REQUIRE(first.exit_code == 0);
  CHECK(first.out == second.out);
}

TEST_CASE("cli: parse failures are counted, all-bad input exits 2") {
  auto dir = temp_dir();
  auto bad = dir / "bad.ndjson";
  std::ofstream(bad) << "{oops\nnot json\n";
  auto result = run("discover " + bad.string());
  CHECK(result.exit_code == 2);

  auto mixed = dir / "mixed.ndjson";
  std::ofstream(mixed) << "{\"a\":1}\n{oops\n{\"a\":2}\n";
  auto ok = run("discover " + mixed.string());
  CHECK(ok.exit_code == 0);
}

TEST_CASE("cli: validate reports per-document verdicts and a recountable fraction") {
  std::vector<Json> train{Json::parse(R"({"v":1})"), Json::parse(R"({"v":2})")};
  auto train_path = write_ndjson("val_train.ndjson", train);
  auto dir = temp_dir();
  auto schema_path = (dir / "val_schema.json").string();
  REQUIRE(run("discover --monoids simple --out " + schema_path + " " + train_path).exit_code == 0);

  // training set against its own schema
  auto self_check = run("validate --schema " + schema_path + " " + train_path);
  REQUIRE(self_check.exit_code == 0);
  auto self_lines = lines_of(self_check.out);
  Json self_summary = Json::parse(self_lines.back());
  CHECK(self_summary.at("fraction") == Json(1.0));

  // mixed corpus: recount per-document verdicts and compare to the summary
  std::vector<Json> mixed{Json::parse(R"({"v":1})"), Json::parse(R"({"v":99})"),
                          Json::parse(R"({"v":"nope"})"), Json::parse(R"({"v":2,"w":1})")};
  auto mixed_path = write_ndjson("val_mixed.ndjson", mixed);
  auto result = run("validate --schema " + schema_path + " " + mixed_path);
  REQUIRE(result.exit_code == 0);  // validation is a report, not a failure
  auto lines = lines_of(result.out);
  REQUIRE(lines.size() == mixed.size() + 1);
  std::uint64_t valid = 0;
  for (std::size_t i = 0; i < mixed.size(); ++i)
    if (Json::parse(lines[i]).at("valid").get<bool>()) ++valid;
  Json summary = Json::parse(lines.back());
  CHECK(summary.at("valid").get<std::uint64_t>() == valid);
  CHECK(summary.at("fraction").get<double>() == double(valid) / double(mixed.size()));
}

TEST_CASE("cli: validate with empty input reports no fraction, exit 0") {
  auto dir = temp_dir();
  auto schema_path = (dir / "empty_schema.json").string();
  auto train_path = write_ndjson("empty_train.ndjson", {Json::parse(R"({"v":1})")});
  REQUIRE(run("discover --monoids min --out " + schema_path + " " + train_path).exit_code == 0);
  auto empty_path = write_ndjson("empty.ndjson", {});
  auto result = run("validate --schema " + schema_path + " " + empty_path);
  CHECK(result.exit_code == 0);
  auto lines = lines_of(result.out);
  REQUIRE(lines.size() == 1);
  CHECK(!Json::parse(lines[0]).contains("fraction"));
}

TEST_CASE("cli: constraints end-to-end on a catalog-shaped corpus") {
  std::mt19937_64 rng(303);
  std::vector<Json> docs;
  auto asin = [](std::size_t i) { return "B" + std::to_string(200000 + i); };
  std::uniform_int_distribution<std::size_t> also_len(1, 5);
  for (std::size_t i = 0; i < 2000; ++i) {
    Json also = Json::array();
    std::uniform_int_distribution<std::size_t> pick(0, 999);
    std::size_t na = also_len(rng);
    for (std::size_t k = 0; k < na; ++k) also.push_back(asin(pick(rng)));
    docs.push_back(Json{{"asin", asin(i)},
                        {"status", std::string(1, char('a' + i % 3))},
                        {"also_viewed", also}});
  }
  auto path = write_ndjson("catalog.ndjson", docs);
  auto dir = temp_dir();
  auto state_path = (dir / "catalog.jz").string();
  REQUIRE(run("discover --monoids all --seed 3 --save-state " + state_path + " " + path +
              " --out /dev/null")
              .exit_code == 0);

  auto result = run("constraints --state " + state_path);
  REQUIRE(result.exit_code == 0);
  bool asin_pk = false, status_pk = false, fk = false;
  for (const auto& line : lines_of(result.out)) {
    Json j = Json::parse(line);
    if (j.at("kind") == Json("primary-key") && j.at("subject") == Json("/asin")) asin_pk = true;
    if (j.at("kind") == Json("primary-key") && j.at("subject") == Json("/status")) status_pk = true;
    if (j.at("kind") == Json("foreign-key") && j.at("subject") == Json("/also_viewed/*") &&
        j.at("target") == Json("/asin"))
      fk = true;
  }
  CHECK(asin_pk);
  CHECK(!status_pk);
  CHECK(fk);

  // identical reports from the same state file (round-trip determinism)
  auto again = run("constraints --state " + state_path);
  CHECK(again.out == result.out);
}

TEST_CASE("cli: constraints without sketches exits 3") {
  auto path = write_ndjson("nosketch.ndjson", {Json::parse(R"({"id":"a"})")});
  auto dir = temp_dir();
  auto state_path = (dir / "nosketch.jz").string();
  REQUIRE(run("discover --monoids simple --save-state " + state_path + " " + path +
              " --out /dev/null")
              .exit_code == 0);
  auto result = run("constraints --state " + state_path);
  CHECK(result.exit_code == 3);
}

TEST_CASE("cli: outliers on the training corpus report nothing numeric") {
  std::mt19937_64 rng(304);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Json> docs;
  for (int i = 0; i < 300; ++i) docs.push_back(Json{{"v", unit(rng)}});
  auto path = write_ndjson("outlier_train.ndjson", docs);
  auto dir = temp_dir();
  auto state_path = (dir / "outlier.jz").string();
  REQUIRE(run("discover --monoids all --save-state " + state_path + " " + path +
              " --out /dev/null")
              .exit_code == 0);

  auto clean = run("outliers --state " + state_path + " --z-max 3 " + path);
  REQUIRE(clean.exit_code == 0);
  CHECK(lines_of(clean.out).empty());

  auto probe_path = write_ndjson("outlier_probe.ndjson", {Json::parse(R"({"v":1e9})")});
  auto hot = run("outliers --state " + state_path + " --z-max 3 " + probe_path);
  auto lines = lines_of(hot.out);
  REQUIRE(lines.size() >= 1);
  bool numeric = false;
  for (const auto& line : lines)
    if (Json::parse(line).at("category") == Json("numeric-zscore")) numeric = true;
  CHECK(numeric);
}

TEST_CASE("cli: generate is deterministic and sampled mode respects reservoirs") {
  std::vector<Json> docs;
  for (int i = 0; i < 40; ++i)
    docs.push_back(Json{{"color", std::vector<std::string>{"red", "green", "blue"}[i % 3]}});
  auto path = write_ndjson("gen_train.ndjson", docs);
  auto dir = temp_dir();
  auto state_path = (dir / "gen.jz").string();
  REQUIRE(run("discover --monoids all --save-state " + state_path + " " + path +
              " --out /dev/null")
              .exit_code == 0);

  auto a = run("generate --state " + state_path + " --mode random --n 100 --seed 1");
  auto b = run("generate --state " + state_path + " --mode random --n 100 --seed 1");
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(lines_of(a.out).size() == 100);

  auto sampled = run("generate --state " + state_path +
                     " --mode sampled --n 50 --seed 2 --inclusion-probability 1");
  for (const auto& line : lines_of(sampled.out)) {
    Json d = Json::parse(line);
    const auto& v = d.at("color").get_ref<const std::string&>();
    CHECK((v == "red" || v == "green" || v == "blue"));
  }
}

TEST_CASE("cli: evaluate reports zero overfit on a single-structure corpus") {
  std::mt19937_64 rng(305);
  std::vector<Json> docs;
  for (int i = 0; i < 100; ++i)
    docs.push_back(Json{{"id", std::int64_t(rng() % 1000)}, {"name", corpus::random_word(rng)}});
  auto path = write_ndjson("eval.ndjson", docs);
  auto result = run("evaluate --split 0.9 --seed 1 --monoids min " + path);
  REQUIRE(result.exit_code == 0);
  Json report = Json::parse(result.out);
  CHECK(report.at("overfit") == Json(0.0));
}

TEST_CASE("cli: usage and data errors map to exit codes 1 and 2") {
  CHECK(run("discover --no-such-flag").exit_code == 1);
  CHECK(run("bogus-subcommand").exit_code == 1);
  CHECK(run("discover /does/not/exist.ndjson").exit_code == 2);
  CHECK(run("constraints --state /does/not/exist.jz").exit_code == 2);
}

TEST_CASE("cli: stats line on stderr carries docs, throughput and rss") {
  auto path = write_ndjson("stats.ndjson", {Json::parse(R"({"a":1})"), Json::parse(R"({"a":2})")});
  auto result = run("discover --monoids min " + path, "2>&1 1>/dev/null");
  REQUIRE(result.exit_code == 0);
  Json stats = Json::parse(lines_of(result.out).back());
  CHECK(stats.at("docs") == Json(2));
  CHECK(stats.at("mode") == Json("streaming"));
  CHECK(stats.at("max_rss_kb").get<std::int64_t>() > 0);
  CHECK(stats.contains("docs_per_sec"));
}

TEST_CASE("cli: constraints on an empty corpus produce no output") {
  auto dir = temp_dir();
  auto empty_path = write_ndjson("empty_corpus.ndjson", {});
  auto state_path = (dir / "empty.jz").string();
  REQUIRE(run("discover --monoids all --save-state " + state_path + " " + empty_path +
              " --out /dev/null")
              .exit_code == 0);
  auto result = run("constraints --state " + state_path);
  CHECK(result.exit_code == 0);
  CHECK(result.out.empty());
}

TEST_CASE("cli: json-array input format") {
  auto dir = temp_dir();
  auto path = (dir / "arr.json").string();
  std::ofstream(path) << R"([{"a":1},{"a":2},{"a":3}])";
  auto result = run("discover --monoids min --format json-array " + path, "2>&1 1>/dev/null");
  REQUIRE(result.exit_code == 0);
  Json stats = Json::parse(lines_of(result.out).back());
  CHECK(stats.at("docs") == Json(3));
}

TEST_CASE("cli: streaming memory high-water grows sublinearly in document count") {
  // 10k vs 100k documents; the accumulated schema is the only state that
  // persists across documents, so peak RSS must stay well under 2x.
  std::mt19937_64 rng(306);
  auto make_file = [&](const std::string& name, std::size_t n) {
    auto path = temp_dir() / name;
    std::ofstream out(path);
    for (std::size_t i = 0; i < n; ++i) {
      Json d{{"id", std::int64_t(i)},
             {"name", corpus::random_word(rng, 4, 12)},
             {"score", double(rng() % 1000) / 10.0}};
      out << d.dump() << "\n";
    }
    return path.string();
  };
  auto small = make_file("mem10k.ndjson", 10000);
  auto large = make_file("mem100k.ndjson", 100000);

  auto rss_of = [&](const std::string& path) {
    auto result = run("discover --mode streaming --monoids all " + path + " --out /dev/null",
                      "2>&1 1>/dev/null");
    REQUIRE(result.exit_code == 0);
    return Json::parse(lines_of(result.out).back()).at("max_rss_kb").get<double>();
  };
  double rss_small = rss_of(small);
  double rss_large = rss_of(large);
  CHECK(rss_large < 2.0 * rss_small);
}

TEST_CASE("cli: ndjson on stdin when no file is given") {
  std::string cmd = std::string("printf '{\"a\":1}\\n' | ") + JSONOID_CLI_PATH +
                    " discover --monoids min 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  REQUIRE(WEXITSTATUS(pclose(pipe)) == 0);
  Json schema = Json::parse(out);
  CHECK(schema.at("type") == Json("object"));
}

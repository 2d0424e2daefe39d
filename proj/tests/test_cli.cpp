#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>

#include <unistd.h>

#include "splitdec/cache.hpp"
#include "splitdec/pipeline.hpp"

using namespace splitdec;
namespace fs = std::filesystem;

namespace {

struct Setup {
  Graph g;
  DistanceData dd;
  IntersectionData in;
  SchemeData s;
  DualData dual;
};

Setup setup(const std::string& desc) {
  Graph g = build_family(desc);
  DistanceData dd = distance_data(g);
  IntersectionData in = intersection_numbers(g, dd);
  SchemeData s = build_scheme(in, dd, natural_field(in));
  s = reorder(s, select_ordering(s, in).ordering);
  DualData dual = dual_data(s, g, dd, 0);
  return {std::move(g), std::move(dd), std::move(in), std::move(s), std::move(dual)};
}

fs::path scratch_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("splitdec_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

RunConfig config(const std::string& graph, const std::string& suites = "auto") {
  RunConfig c;
  c.graph = graph;
  c.suites = parse_suites(suites);
  return c;
}

std::string read_file(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(is), {});
}

}  // namespace

TEST_CASE("cache round trip reproduces identical dumps") {
  Setup h = setup("hamming:3,2");
  const ExactBackend be(h.s.field);
  SplitSystem<Scalar> sys(h.s, h.dual, h.dd, be);
  const fs::path dir = scratch_dir("roundtrip");
  CacheKey key{"split", "hamming:3,2", 0, h.s.ordering, 1, "exact"};

  CHECK_FALSE(cache_load(dir.string(), key, h.s, h.dual, h.dd, be).has_value());
  cache_store(dir.string(), key, sys, h.s.field);
  auto back = cache_load(dir.string(), key, h.s, h.dual, h.dd, be);
  REQUIRE(back.has_value());
  CHECK(serialize_split(*back, h.s.field) == serialize_split(sys, h.s.field));
  for (SplitKind k : kAllSplits) {
    CHECK(dump_matrix(back->grid(k).C(), h.s.field) == dump_matrix(sys.grid(k).C(), h.s.field));
    CHECK(dump_matrix(back->grid(k).Cinv(), h.s.field) == dump_matrix(sys.grid(k).Cinv(), h.s.field));
    CHECK(back->dims(k) == sys.dims(k));
    for (int i = 0; i <= h.s.D; ++i)
      for (int j = 0; j <= h.s.D; ++j)
        CHECK(dump_matrix(back->grid(k).projector(i, j), h.s.field) ==
              dump_matrix(sys.grid(k).projector(i, j), h.s.field));
  }
  fs::remove_all(dir);
}

TEST_CASE("cache key depends on qsign for qtet artifacts only") {
  CacheKey a{"split", "bilinear:3,3,2", 0, {0, 1, 2, 3}, 1, "exact"};
  CacheKey b = a;
  b.qsign = -1;
  CHECK(a.canonical() == b.canonical());
  CHECK(a.hex() == b.hex());
  a.artifact = b.artifact = "qtet";
  CHECK(a.canonical() != b.canonical());
  CHECK(a.hex() != b.hex());
  CacheKey c = a;
  c.base_vertex = 1;
  CHECK(c.hex() != a.hex());
  c = a;
  c.ordering = {0, 2, 1, 3};
  CHECK(c.hex() != a.hex());
  c = a;
  c.backend = "f64";
  CHECK(c.hex() != a.hex());
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("a corrupted cache entry is detected and recomputed") {
  const fs::path dir = scratch_dir("corrupt");
  RunConfig cfg = config("hamming:3,2", "split");
  cfg.cache_dir = dir.string();
  RunResult first = run_verify(cfg);
  CHECK(first.exit_code == 0);
  CHECK(first.report["metadata"]["cache"] == "miss");
  RunResult second = run_verify(cfg);
  CHECK(second.report["metadata"]["cache"] == "hit");
  CHECK(checks_json(second.log).dump() == checks_json(first.log).dump());

  fs::path entry;
  for (const auto& e : fs::directory_iterator(dir)) entry = e.path();
  REQUIRE_FALSE(entry.empty());
  std::string text = read_file(entry);
  const size_t at = text.size() - 5;
  text[at] = text[at] == '1' ? '2' : '1';
  std::ofstream(entry, std::ios::binary) << text;

  Setup h = setup("hamming:3,2");
  CacheKey key{"split", "hamming:3,2", 0, h.s.ordering, 1, "exact"};
  try {
    cache_load(dir.string(), key, h.s, h.dual, h.dd, ExactBackend(h.s.field));
    FAIL("corrupt entry accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CacheCorrupt);
  }

  RunResult third = run_verify(cfg);
  CHECK(third.exit_code == 0);
  CHECK(third.report["metadata"]["cache"] == "corrupt, recomputed");
  CHECK(checks_json(third.log).dump() == checks_json(first.log).dump());
  CHECK(run_verify(cfg).report["metadata"]["cache"] == "hit");
  fs::remove_all(dir);
}

TEST_CASE("configuration parsing") {
  CHECK(parse_probe("full").full);
  Probe p = parse_probe("sample:5:7");
  CHECK_FALSE(p.full);
  CHECK(p.count == 5);
  CHECK(p.seed == 7);
  CHECK(p.label() == "sample:5:7");
  for (const char* bad : {"sample:0:1", "sample:x:1", "sample:3", "some", "sample:-2:1"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_probe(bad), Error);
  }
  CHECK_FALSE(parse_ordering("auto").has_value());
  CHECK(*parse_ordering("0,2,1,3") == std::vector<int>{0, 2, 1, 3});
  CHECK_THROWS_AS(parse_ordering("1,0,2"), Error);
  CHECK_THROWS_AS(parse_ordering("0,1,1"), Error);
  CHECK(parse_suites("qtet,split,qtet") == std::vector<std::string>{"qtet", "split"});
  CHECK_THROWS_AS(parse_suites("scheme,bogus"), Error);
  CHECK(parse_qsign("-") == -1);
  CHECK(parse_qsign("+") == 1);
  CHECK_THROWS_AS(parse_qsign("0"), Error);

  RunConfig c = config("hamming:3,2");
  c.tol = 0;
  CHECK_THROWS_AS(validate(c), Error);
  c.tol = 1e-8;
  c.backend = "gpu";
  CHECK_THROWS_AS(validate(c), Error);
}

TEST_CASE("exit code contract") {
  CHECK(exit_code(ErrorKind::PropertyViolation) == 1);
  CHECK(exit_code(ErrorKind::CrossExpressionMismatch) == 1);
  CHECK(exit_code(ErrorKind::NotFullySplit) == 1);
  CHECK(exit_code(ErrorKind::SuiteInapplicable) == 2);
  CHECK(exit_code(ErrorKind::ConfigError) == 2);
  CHECK(exit_code(ErrorKind::BEqualsOne) == 2);
  CHECK(exit_code(ErrorKind::NotDistanceRegular) == 2);
  CHECK(exit_code(ErrorKind::DivideByZero) == 3);
  CHECK(exit_code(ErrorKind::CacheCorrupt) == 3);

  RunResult r = run_verify(config("hamming:3,2", "qtet"));
  CHECK(r.exit_code == 2);
  REQUIRE(r.error.has_value());
  CHECK(r.error->kind() == ErrorKind::SuiteInapplicable);
  CHECK(r.report["error"]["kind"] == "SuiteInapplicable");

  RunConfig bad = config("hamming:3,2");
  bad.base_vertex = 8;
  CHECK(run_verify(bad).exit_code == 2);
  CHECK(run_verify(config("johnson:6,3", "tmodule")).exit_code == 0);
  CHECK(run_verify(config("nosuch:1")).exit_code == 2);
  RunConfig order = config("hamming:3,2", "scheme");
  order.ordering = std::vector<int>{0, 2, 1, 3};
  RunResult o = run_verify(order);
  CHECK(o.exit_code == 1);
  REQUIRE(o.error.has_value());
  CHECK(o.error->kind() == ErrorKind::PropertyViolation);
}

TEST_CASE("verify on H(3,2): every check passes with literal zero residual") {
  RunResult r = run_verify(config("hamming:3,2", "scheme,split,tmodule"));
  CHECK(r.exit_code == 0);
  CHECK(r.report["schema"] == "splitdec-report/1");
  std::set<std::string> names;
  for (const auto& c : r.report["checks"]) {
    CAPTURE(c.dump());
    CHECK(c["status"] == "pass");
    CHECK(c["mode"] == "exact");
    CHECK(c["max_residual"] == "0");
    CHECK(names.insert(c["name"].get<std::string>()).second);
    CHECK_FALSE(c["anchor"].get<std::string>().empty());
  }
  CHECK(r.report["tables"]["intersection_array"]["b"] == std::vector<long>{3, 2, 1});
  CHECK(r.report["tables"]["intersection_array"]["c"] == std::vector<long>{1, 2, 3});
  CHECK(r.report["tables"]["modules"].size() == 3);
  CHECK(r.report["summary"]["fail"] == 0);
  // default suites skip qtet on b = 1 instead of failing
  RunResult d = run_verify(config("hamming:3,2"));
  CHECK(d.exit_code == 0);
  CHECK(d.report["summary"]["skipped"] == 1);
}

TEST_CASE("reports are deterministic apart from timings") {
  RunConfig c = config("cycle:8");
  RunResult a = run_verify(c);
  RunResult b = run_verify(c);
  CHECK(a.exit_code == 0);
  CHECK(a.report["checks"].dump() == b.report["checks"].dump());
  CHECK(a.report["tables"].dump() == b.report["tables"].dump());
  nlohmann::json ma = a.report["metadata"], mb = b.report["metadata"];
  ma.erase("timings");
  mb.erase("timings");
  CHECK(ma.dump() == mb.dump());
}

TEST_CASE("info output") {
  std::vector<std::string> lines;
  nlohmann::json j = run_info(config("hamming:3,2"), lines);
  CHECK(j["D"] == 3);
  std::string all;
  for (const auto& l : lines) all += l + "\n";
  CHECK(all.find("n=8 D=3") != std::string::npos);
  CHECK(all.find("{3,2,1;1,2,3}") != std::string::npos);
  CHECK(all.find("multiplicities: 1,3,3,1") != std::string::npos);
  CHECK(j["classical"]["accepted"] == false);

  lines.clear();
  run_info(config("cycle:5"), lines);
  all.clear();
  for (const auto& l : lines) all += l + "\n";
  CHECK(all.find("not classical with α=b−1") != std::string::npos);

  lines.clear();
  j = run_info(config("bilinear:3,3,2"), lines);
  CHECK(j["classical"]["accepted"] == true);
  CHECK(j["classical"]["b"] == 2);
  CHECK(j["classical"]["beta"] == "7");
  CHECK(lines.size() >= 8);
  CHECK(std::find(lines.begin(), lines.end(), "classical: classical (3,2,1,7)") != lines.end());
}

TEST_CASE("dump writes a manifest naming every matrix") {
  const fs::path dir = scratch_dir("dump");
  nlohmann::json m = run_dump(config("hamming:3,2"), dir.string());
  CHECK(m["files"].size() == 3 * 4 + 8);
  for (const auto& [rel, sum] : m["files"].items()) {
    CAPTURE(rel);
    const std::string text = read_file(dir / rel);
    CHECK(fnv1a_hex(text) == sum.get<std::string>());
    CHECK(parse_matrix(text).rows() == 8);
  }
  CHECK(fs::exists(dir / "manifest.json"));
  fs::remove_all(dir);
}

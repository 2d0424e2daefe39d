#include "splitdec/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <Eigen/Core>

#include "splitdec/cache.hpp"
#include "splitdec/tmodules.hpp"

namespace splitdec {

using nlohmann::json;

namespace {

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

long parse_long(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::ConfigError, what + ": '" + s + "' is not an integer");
  }
}

json scalars_json(const std::vector<Scalar>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(format(x));
  return out;
}

bool wants(const RunConfig& cfg, const std::string& suite) {
  return cfg.suites.empty() || std::find(cfg.suites.begin(), cfg.suites.end(), suite) != cfg.suites.end();
}

bool explicitly(const RunConfig& cfg, const std::string& suite) {
  return std::find(cfg.suites.begin(), cfg.suites.end(), suite) != cfg.suites.end();
}

class Timer {
 public:
  explicit Timer(json& sink, std::string name) : sink_(sink), name_(std::move(name)) {}
  ~Timer() {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    sink_[name_] = std::round(s * 1000.0) / 1000.0;
  }

 private:
  json& sink_;
  std::string name_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json config_json(const RunConfig& cfg) {
  json c;
  c["graph"] = cfg.graph;
  c["base_vertex"] = cfg.base_vertex;
  c["backend"] = cfg.backend;
  c["tol"] = cfg.tol;
  c["qsign"] = cfg.qsign > 0 ? "+" : "-";
  c["probe"] = cfg.probe.label();
  if (cfg.ordering) {
    c["ordering"] = *cfg.ordering;
  } else {
    c["ordering"] = "auto";
  }
  c["suites"] = cfg.suites.empty() ? json("auto") : json(cfg.suites);
  return c;
}

// State shared by the stages of one run.
struct Run {
  const RunConfig& cfg;
  json meta, tables, timings;
  CheckLog log;
  Graph g;
  DistanceData dd;
  IntersectionData in;
  SchemeData raw, s;
  DualData dual;
  OrderingChoice choice;
  std::vector<std::vector<int>> qpoly;
  std::optional<SplitSystem<Scalar>> split;
  std::string backend;

  explicit Run(const RunConfig& c) : cfg(c) {}

  void load_graph() {
    Timer t(timings, "graph");
    g = build_family(cfg.graph);
    if (cfg.base_vertex < 0 || cfg.base_vertex >= g.n)
      throw Error(ErrorKind::ConfigError, "base vertex " + std::to_string(cfg.base_vertex) + " outside 0.." +
                                              std::to_string(g.n - 1));
    dd = distance_data(g);
    in = intersection_numbers(g, dd);
    backend = cfg.backend == "auto" ? (g.n <= kModuleLimit ? "exact" : "f64") : cfg.backend;
    meta["graph"] = cfg.graph;
    meta["n"] = g.n;
    meta["D"] = in.D;
    meta["backend"] = backend;
    tables["intersection_array"] = {{"b", std::vector<long>(in.b.begin(), in.b.end() - 1)},
                                    {"c", std::vector<long>(in.c.begin() + 1, in.c.end())}};
  }

  void scheme() {
    Timer t(timings, "scheme");
    CheckLog scratch;
    CheckLog& sink = wants(cfg, "scheme") ? log : scratch;
    raw = build_scheme(in, dd, natural_field(in, cfg.qsign), &sink);
    qpoly = find_qpoly_orderings(raw);
    choice = select_ordering(raw, in, cfg.ordering);
    sink.record("scheme.ordering.qpoly", "E_0, ..., E_D is a Q-polynomial ordering", true);
    s = reorder(raw, choice.ordering);
    dual = dual_data(s, g, dd, cfg.base_vertex, &sink);
    tables["eigenvalues"] = scalars_json(s.theta);
    tables["multiplicities"] = s.m;
    tables["dual_eigenvalues"] = scalars_json(dual.thetastar);
    tables["ordering"] = choice.ordering;
    tables["qpoly_orderings"] = qpoly;
    tables["self_dual"] = choice.self_dual;
    tables["field_b"] = s.field.b();
  }

  void build_split() {
    if (split) return;
    Timer t(timings, "split_build");
    const ExactBackend be(s.field);
    const std::string dir = cfg.cache_dir;
    CacheKey key{"split", cfg.graph, cfg.base_vertex, choice.ordering, cfg.qsign, "exact"};
    if (!dir.empty()) {
      try {
        split = cache_load(dir, key, s, dual, dd, be);
        meta["cache"] = split ? "hit" : "miss";
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::CacheCorrupt) throw;
        meta["cache"] = "corrupt, recomputed";
        meta["cache_error"] = e.what();
      }
    }
    if (!split) {
      split.emplace(s, dual, dd, be);
      if (!dir.empty()) cache_store(dir, key, *split, s.field);
    }
    json dims;
    for (SplitKind k : kAllSplits) dims[split_name(k)] = split->dims(k);
    tables["tilde_dims"] = dims;
  }

  void split_suite() {
    build_split();
    Timer t(timings, "split");
    if (backend == "exact") {
      verify_split_suite(*split, s, dual, dd, ExactBackend(s.field), log);
    } else {
      const FloatBackend fb(s.field, cfg.tol);
      const SplitSystem<Complex> fs = SplitSystem<Complex>::from_exact(*split, fb);
      verify_split_suite(fs, s, dual, dd, fb, log);
    }
  }

  void qtet_suite() {
    ClassicalParams p, pp;
    try {
      p = detect_classical(in, cfg.qsign);
    } catch (const Error& e) {
      const ErrorKind k = e.kind();
      if (k != ErrorKind::BEqualsOne && k != ErrorKind::NotClassicalAlphaBMinusOne && k != ErrorKind::AmbiguousClassical)
        throw;
      tables["classical"] = {{"accepted", false}, {"reason", e.what()}};
      if (explicitly(cfg, "qtet")) throw Error(ErrorKind::SuiteInapplicable, std::string("qtet: ") + e.what());
      log.skip("qtet", "classical parameters with alpha = b - 1", e.what());
      return;
    }
    tables["classical"] = {{"accepted", true}, {"D", p.D}, {"b", p.b}, {"alpha", p.alpha},
                           {"beta", p.beta.get_str()}, {"candidates", p.candidates}};
    log.record("qtet.ordering.self_dual", "q^h_{ij} = p^h_{ij} under the chosen ordering", choice.self_dual,
               "no self-dual Q-polynomial ordering");
    log.checks().back().branch = p.branch();
    if (!choice.self_dual) return;
    fit_alpha(p, s, dual, &log);
    pp = detect_classical(in, -cfg.qsign);
    fit_alpha(pp, s, dual);
    tables["classical"]["alpha0"] = format(p.alpha0);
    tables["classical"]["alpha1"] = format(p.alpha1);
    tables["classical"]["branch"] = p.branch();
    tables["classical"]["q"] = format(p.field.q());
    build_split();
    Timer t(timings, "qtet");
    {
      const ExactBackend be(p.field);
      QTetSystem<Scalar> sys = build_qtet(p, s, dual, g, *split, be, &log);
      QTetSystem<Scalar> prime = build_qtet(pp, s, dual, g, *split, ExactBackend(pp.field));
      check_tables(sys, be, log);
      const ExactMat v = probe_block(s.n, cfg.probe, be);
      const std::string sweep = cfg.probe.full ? "full" : "probe";
      check_transpose_suite(sys, v, sweep, be, log);
      check_conjugate_suite(sys, prime, v, sweep, be, log);
      check_boxtimes_relations(sys, v, sweep, be, log);
      check_generator_symmetries(sys, prime, v, sweep, be, log);
    }
    if (backend == "f64" && !cfg.probe.full) {
      const FloatBackend fb(p.field, cfg.tol), fbp(pp.field, cfg.tol);
      const SplitSystem<Complex> fsplit = SplitSystem<Complex>::from_exact(*split, fb);
      QTetSystem<Complex> sys = build_qtet(p, s, dual, g, fsplit, fb);
      QTetSystem<Complex> prime = build_qtet(pp, s, dual, g, fsplit, fbp);
      const FloatMat v = probe_block(s.n, Probe{true}, fb);
      check_transpose_suite(sys, v, "full", fb, log);
      check_conjugate_suite(sys, prime, v, "full", fb, log);
      check_boxtimes_relations(sys, v, "full", fb, log);
      check_generator_symmetries(sys, prime, v, "full", fb, log);
    }
  }

  void tmodule_suite() {
    if (g.n > kModuleLimit) {
      const std::string why = "module decomposition is limited to " + std::to_string(kModuleLimit) + " vertices";
      if (explicitly(cfg, "tmodule")) throw Error(ErrorKind::SuiteInapplicable, "tmodule: " + why);
      log.skip("tmodule", "decomposition into irreducible T-modules", why);
      return;
    }
    build_split();
    Timer t(timings, "tmodule");
    ModuleContext ctx(s, dual, g, dd);
    Decomposition dec = decompose(ctx);
    const ExactBackend be(s.field);
    Displacement<Scalar> disp = displacement_projectors(*split, be);
    check_decomposition(dec, ctx, log);
    for (size_t k = 0; k < dec.modules.size(); ++k)
      check_module_cells(dec.modules[k], static_cast<int>(k), ctx, *split, disp, log);
    displacement_cross_check(dec, disp, s.D, log);
    json mods = json::array();
    for (const auto& w : dec.modules)
      mods.push_back({{"dim", w.dim()}, {"rho", w.rho}, {"tau", w.tau}, {"d", w.d}, {"eta", w.eta}, {"zeta", w.zeta}});
    tables["modules"] = mods;
    meta["module_draws"] = dec.draws;
  }
};

json versions_json() {
  return {{"splitdec", kVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"gmp", gmp_version}};
}

}  // namespace

Probe parse_probe(const std::string& text) {
  if (text == "full") return Probe{true, 0, 0};
  std::vector<std::string> f;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) f.push_back(item);
  if (f.size() != 3 || f[0] != "sample")
    throw Error(ErrorKind::ConfigError, "probe must be 'full' or 'sample:N:seed', got '" + text + "'");
  const long count = parse_long(f[1], "probe count");
  if (count < 1) throw Error(ErrorKind::ConfigError, "probe count must be at least 1");
  const long seed = parse_long(f[2], "probe seed");
  return Probe{false, static_cast<int>(count), static_cast<std::uint64_t>(seed)};
}

std::optional<std::vector<int>> parse_ordering(const std::string& text) {
  if (text.empty() || text == "auto") return std::nullopt;
  std::vector<int> out;
  for (const auto& s : split_commas(text)) out.push_back(static_cast<int>(parse_long(s, "ordering entry")));
  std::vector<int> sorted = out;
  std::sort(sorted.begin(), sorted.end());
  for (size_t k = 0; k < sorted.size(); ++k)
    if (sorted[k] != static_cast<int>(k))
      throw Error(ErrorKind::ConfigError, "ordering must be a permutation of 0..D, got '" + text + "'");
  if (out.empty() || out[0] != 0) throw Error(ErrorKind::ConfigError, "ordering must start with 0");
  return out;
}

std::vector<std::string> parse_suites(const std::string& text) {
  if (text.empty() || text == "auto") return {};
  std::vector<std::string> out;
  for (const auto& s : split_commas(text)) {
    if (std::find(kSuites.begin(), kSuites.end(), s) == kSuites.end())
      throw Error(ErrorKind::ConfigError, "unknown suite '" + s + "'");
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  return out;
}

int parse_qsign(const std::string& text) {
  if (text == "+" || text == "+1" || text == "1") return 1;
  if (text == "-" || text == "-1") return -1;
  throw Error(ErrorKind::ConfigError, "qsign must be + or -, got '" + text + "'");
}

void validate(const RunConfig& cfg) {
  if (cfg.graph.empty()) throw Error(ErrorKind::ConfigError, "no graph given");
  if (!(cfg.tol > 0)) throw Error(ErrorKind::ConfigError, "tol must be positive");
  if (!cfg.probe.full && cfg.probe.count < 1) throw Error(ErrorKind::ConfigError, "probe count must be at least 1");
  if (cfg.backend != "auto" && cfg.backend != "exact" && cfg.backend != "f64")
    throw Error(ErrorKind::ConfigError, "backend must be exact or f64");
  if (cfg.qsign != 1 && cfg.qsign != -1) throw Error(ErrorKind::ConfigError, "qsign must be + or -");
  for (const auto& s : cfg.suites)
    if (std::find(kSuites.begin(), kSuites.end(), s) == kSuites.end())
      throw Error(ErrorKind::ConfigError, "unknown suite '" + s + "'");
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::PropertyViolation:
    case ErrorKind::NegativeKrein:
    case ErrorKind::NonConstantOnSphere:
    case ErrorKind::ProductRuleViolation:
    case ErrorKind::CrossExpressionMismatch:
    case ErrorKind::AlphaFitFailure:
    case ErrorKind::SpectralMismatch:
    case ErrorKind::TableViolation:
    case ErrorKind::SingularFactor:
    case ErrorKind::NotFullySplit:
    case ErrorKind::NonContiguousSupport:
    case ErrorKind::NotADirectSum:
      return 1;
    case ErrorKind::ConfigError:
    case ErrorKind::ParseError:
    case ErrorKind::SuiteInapplicable:
    case ErrorKind::NotClassicalAlphaBMinusOne:
    case ErrorKind::BEqualsOne:
    case ErrorKind::AmbiguousClassical:
    case ErrorKind::UnsupportedFieldOrder:
    case ErrorKind::DegenerateParameters:
    case ErrorKind::Disconnected:
    case ErrorKind::NotDistanceRegular:
    case ErrorKind::LoopOrMultiEdge:
    case ErrorKind::EigenvalueNotInField:
      return 2;
    default:
      return 3;
  }
}

json check_json(const Check& c) {
  json j{{"name", c.name},
         {"anchor", c.anchor},
         {"status", std::string(to_string(c.status))},
         {"mode", c.mode},
         {"max_residual", c.max_residual}};
  if (!c.witness.empty()) j["witness"] = c.witness;
  if (!c.branch.empty()) j["branch"] = c.branch;
  return j;
}

json checks_json(const CheckLog& log) {
  json out = json::array();
  for (const auto& c : log.checks()) out.push_back(check_json(c));
  return out;
}

RunResult run_verify(const RunConfig& cfg) {
  RunResult res;
  Run run(cfg);
  bool internal = false;
  try {
    validate(cfg);
    run.load_graph();
    run.scheme();
    if (wants(cfg, "split")) run.split_suite();
    if (wants(cfg, "qtet")) run.qtet_suite();
    if (wants(cfg, "tmodule")) run.tmodule_suite();
  } catch (const Error& e) {
    res.error = e;
  } catch (const std::exception& e) {
    internal = true;
    res.error = Error(ErrorKind::IndexOutOfRange, std::string("internal error: ") + e.what());
  }
  res.log = std::move(run.log);
  if (res.error) {
    res.exit_code = internal ? 3 : exit_code(res.error->kind());
  } else {
    res.exit_code = res.log.all_pass() ? 0 : 1;
  }
  // a check that failed before its suite threw still makes the run a failure
  if (res.error && res.exit_code != 1 && !res.log.all_pass()) res.exit_code = 1;

  json& r = res.report;
  r["schema"] = kReportSchema;
  run.meta["config"] = config_json(cfg);
  run.meta["timings"] = run.timings;
  run.meta["versions"] = versions_json();
  r["metadata"] = run.meta;
  r["checks"] = checks_json(res.log);
  r["tables"] = run.tables;
  size_t pass = 0, fail = 0, skipped = 0;
  for (const auto& c : res.log.checks()) {
    pass += c.status == Status::pass;
    fail += c.status == Status::fail;
    skipped += c.status == Status::skipped;
  }
  r["summary"] = {{"checks", res.log.checks().size()}, {"pass", pass}, {"fail", fail}, {"skipped", skipped},
                  {"exit_code", res.exit_code}};
  if (res.error) r["error"] = {{"kind", std::string(to_string(res.error->kind()))}, {"message", res.error->what()}};
  return res;
}

json run_info(const RunConfig& cfg, std::vector<std::string>& lines) {
  validate(cfg);
  Run run(cfg);
  run.load_graph();
  run.scheme();
  json out = run.tables;
  out["n"] = run.g.n;
  out["D"] = run.in.D;
  out["graph"] = cfg.graph;
  auto join = [](const auto& v, auto fmt) {
    std::string s;
    for (size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + fmt(v[k]);
    return s;
  };
  auto num = [](auto x) { return std::to_string(x); };
  auto sca = [](const Scalar& x) { return format(x); };
  lines.push_back("graph: " + cfg.graph);
  lines.push_back("n=" + std::to_string(run.g.n) + " D=" + std::to_string(run.in.D));
  lines.push_back("intersection array: {" + join(std::vector<long>(run.in.b.begin(), run.in.b.end() - 1), num) + ";" +
                  join(std::vector<long>(run.in.c.begin() + 1, run.in.c.end()), num) + "}");
  lines.push_back("eigenvalues: " + join(run.raw.theta, sca));
  lines.push_back("multiplicities: " + join(run.raw.m, num));
  std::string orders;
  json sd = json::array();
  for (const auto& o : run.qpoly) {
    const bool self_dual = check_self_dual(run.raw, o, run.in).pass;
    sd.push_back(self_dual);
    orders += (orders.empty() ? "" : " ") + join(o, num) + (self_dual ? " (self-dual)" : "");
  }
  out["qpoly_self_dual"] = sd;
  lines.push_back("Q-polynomial orderings: " + (orders.empty() ? std::string("none") : orders));
  lines.push_back("chosen ordering: " + join(run.choice.ordering, num) +
                  (run.choice.self_dual ? " (self-dual)" : " (not self-dual)"));
  try {
    ClassicalParams p = detect_classical(run.in, cfg.qsign);
    std::string status = "classical (" + std::to_string(p.D) + "," + std::to_string(p.b) + "," +
                         std::to_string(p.alpha) + "," + p.beta.get_str() + ")";
    out["classical"] = {{"accepted", true}, {"D", p.D}, {"b", p.b}, {"alpha", p.alpha}, {"beta", p.beta.get_str()},
                        {"candidates", p.candidates}};
    lines.push_back("classical: " + status);
    for (const auto& cand : p.candidates) lines.push_back("  " + cand);
  } catch (const Error& e) {
    out["classical"] = {{"accepted", false}, {"kind", std::string(to_string(e.kind()))}, {"reason", e.what()}};
    lines.push_back(std::string("classical: not classical with α=b−1 (") + e.what() + ")");
  }
  return out;
}

json run_dump(const RunConfig& cfg, const std::string& dir) {
  validate(cfg);
  Run run(cfg);
  run.load_graph();
  run.scheme();
  run.build_split();
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "scheme");
  fs::create_directories(fs::path(dir) / "split");
  json files;
  auto write = [&](const std::string& rel, const ExactMat& m) {
    std::ofstream os(fs::path(dir) / rel);
    os << dump_matrix(m, run.s.field);
    if (!os) throw Error(ErrorKind::ConfigError, "cannot write " + rel);
    files[rel] = fnv1a_hex(dump_matrix(m, run.s.field));
  };
  for (int i = 0; i <= run.s.D; ++i) {
    write("scheme/A_" + std::to_string(i) + ".txt", run.dd.A(i));
    write("scheme/E_" + std::to_string(i) + ".txt", run.s.E(i, run.dd));
    write("scheme/Astar_" + std::to_string(i) + ".txt", run.dual.Astar(i));
  }
  for (SplitKind k : kAllSplits) {
    write("split/" + split_name(k) + "_C.txt", run.split->grid(k).C());
    write("split/" + split_name(k) + "_Cinv.txt", run.split->grid(k).Cinv());
  }
  json manifest{{"schema", kReportSchema}, {"graph", cfg.graph}, {"files", files}, {"tables", run.tables}};
  std::ofstream os(fs::path(dir) / "manifest.json");
  os << manifest.dump(2) << '\n';
  return manifest;
}

}  // namespace splitdec

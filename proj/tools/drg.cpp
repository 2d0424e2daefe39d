#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "splitdec/pipeline.hpp"

using namespace splitdec;

namespace {

struct Flags {
  std::string graph, backend = "auto", qsign = "+", probe = "sample:32:42", ordering = "auto", suites = "auto", out,
                     cache_dir;
  int base_vertex = 0;
  double tol = 1e-8;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--graph", f.graph, "family descriptor or file:<path>")->required();
  sub->add_option("--base-vertex", f.base_vertex, "base vertex x");
  sub->add_option("--backend", f.backend, "auto, exact or f64");
  sub->add_option("--tol", f.tol, "relative tolerance of the f64 backend");
  sub->add_option("--qsign", f.qsign, "sign of the square root q of b (+ or -)");
  sub->add_option("--ordering", f.ordering, "comma-separated idempotent ordering, or auto");
  sub->add_option("--cache-dir", f.cache_dir, "directory of cached split grids");
}

RunConfig to_config(const Flags& f) {
  RunConfig c;
  c.graph = f.graph;
  c.base_vertex = f.base_vertex;
  c.backend = f.backend;
  c.tol = f.tol;
  c.qsign = parse_qsign(f.qsign);
  c.probe = parse_probe(f.probe);
  c.ordering = parse_ordering(f.ordering);
  c.suites = parse_suites(f.suites);
  c.out = f.out;
  c.cache_dir = f.cache_dir;
  if (c.cache_dir.empty())
    if (const char* env = std::getenv("DRG_CACHE_DIR")) c.cache_dir = env;
  validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split decompositions, q-tetrahedron actions and T-modules of distance-regular graphs"};
  app.require_subcommand(1);
  Flags f;
  CLI::App* info = app.add_subcommand("info", "parameters, eigenvalues, orderings, classical parameters");
  CLI::App* verify = app.add_subcommand("verify", "run the verification suites and write a JSON report");
  CLI::App* dump = app.add_subcommand("dump", "write scheme and split matrices as text");
  for (CLI::App* sub : {info, verify, dump}) add_common(sub, f);
  info->add_option("--out", f.out, "also write the info as JSON");
  verify->add_option("--probe", f.probe, "full or sample:N:seed");
  verify->add_option("--suites", f.suites, "comma-separated subset of scheme,split,qtet,tmodule");
  verify->add_option("--out", f.out, "report path (stdout when omitted)");
  dump->add_option("--out", f.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = to_config(f);
    if (info->parsed()) {
      std::vector<std::string> lines;
      const nlohmann::json j = run_info(cfg, lines);
      for (const auto& l : lines) std::cout << l << '\n';
      if (!cfg.out.empty()) std::ofstream(cfg.out) << j.dump(2) << '\n';
      return 0;
    }
    if (dump->parsed()) {
      run_dump(cfg, cfg.out);
      std::cout << "wrote " << cfg.out << '\n';
      return 0;
    }
    RunResult r = run_verify(cfg);
    const std::string text = r.report.dump(2);
    if (cfg.out.empty()) {
      std::cout << text << '\n';
    } else {
      std::ofstream os(cfg.out);
      os << text << '\n';
      if (!os) {
        std::cerr << "cannot write " << cfg.out << '\n';
        return 3;
      }
    }
    const auto& s = r.report["summary"];
    std::cerr << s["pass"] << " pass, " << s["fail"] << " fail, " << s["skipped"] << " skipped";
    if (r.error) std::cerr << "; " << r.error->what();
    std::cerr << '\n';
    return r.exit_code;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}

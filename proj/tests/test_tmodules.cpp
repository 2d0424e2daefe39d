#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "splitdec/tmodules.hpp"

using namespace splitdec;

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

void require_all_pass(const CheckLog& log) {
  for (const auto& c : log.checks()) {
    CAPTURE(c.name);
    CAPTURE(c.witness);
    CHECK(c.status == Status::pass);
  }
}

// Span of v, A v, A* v, ... with ranks from the naive elimination oracle.
ExactMat naive_closure(const ExactMat& A, const ExactMat& Astar, ExactMat v) {
  Index r = oracle::naive_rank(v);
  for (;;) {
    ExactMat next(v.rows(), 3 * v.cols());
    next << v, oracle::naive_matmul(A, v), oracle::naive_matmul(Astar, v);
    const Index r2 = oracle::naive_rank(next);
    if (r2 == r) return v;
    v = next;
    r = r2;
  }
}

CheckLog full_suite(const Setup& h, Decomposition& dec) {
  ExactBackend be(h.s.field);
  ModuleContext ctx(h.s, h.dual, h.g, h.dd);
  dec = decompose(ctx);
  SplitSystem<Scalar> split(h.s, h.dual, h.dd, be);
  Displacement<Scalar> disp = displacement_projectors(split, be);
  CheckLog log;
  check_decomposition(dec, ctx, log);
  for (size_t k = 0; k < dec.modules.size(); ++k)
    check_module_cells(dec.modules[k], static_cast<int>(k), ctx, split, disp, log);
  displacement_cross_check(dec, disp, h.s.D, log);
  return log;
}

}  // namespace

TEST_CASE("hypercube modules") {
  Setup h = setup("hamming:3,2");
  Decomposition dec;
  CheckLog log = full_suite(h, dec);
  require_all_pass(log);
  REQUIRE(dec.modules.size() == 3);
  const TModule& w0 = dec.modules[0];
  CHECK(std::tie(w0.rho, w0.tau, w0.d, w0.eta, w0.zeta) == std::tuple{0, 0, 3, 0, 0});
  CHECK(w0.dim() == 4);
  for (size_t k = 1; k < 3; ++k) {
    const TModule& w = dec.modules[k];
    CHECK(std::tie(w.rho, w.tau, w.d, w.eta, w.zeta) == std::tuple{1, 1, 1, 0, 0});
    CHECK(w.dim() == 2);
  }

  // the primary module is the closure of x-hat
  ModuleContext ctx(h.s, h.dual, h.g, h.dd);
  ExactMat xhat = ExactMat::Zero(8, 1);
  xhat(0, 0) = 1;
  ExactMat Astar = ExactMat::Zero(8, 8);
  for (Index y = 0; y < 8; ++y) Astar(y, y) = h.dual.astar[1][static_cast<size_t>(y)];
  ExactMat prim = naive_closure(h.g.adjacency(), Astar, xhat);
  CHECK(oracle::naive_rank(prim) == 4);
  ExactMat both(8, prim.cols() + 4);
  both << prim, w0.basis.basis();
  CHECK(oracle::naive_rank(both) == 4);
  // every vector orthogonal to it in E*_1 V generates a 2-dimensional module
  ExactMat u = ExactMat::Zero(8, 1);
  const auto& sh1 = ctx.shell(1);
  u(sh1[0], 0) = 1;
  u(sh1[1], 0) = -1;
  CHECK(oracle::naive_rank(naive_closure(h.g.adjacency(), Astar, u)) == 2);

  // W^dd_0 of the primary module sits in the (0,3) cell
  std::vector<Subspace<Scalar>> cells = module_cells(w0, kDownDown, ctx);
  REQUIRE(cells.size() == 4);
  SplitSystem<Scalar> split(h.s, h.dual, h.dd, ExactBackend());
  CHECK(split.grid(kDownDown).cell(0, 3).contains(cells[0], ExactBackend()));
  for (SplitKind k : kAllSplits) {
    Index total = 0;
    for (const auto& c : module_cells(w0, k, ctx)) total += c.dim();
    CHECK(total == 4);
  }

  Displacement<Scalar> disp = displacement_projectors(split, ExactBackend());
  CHECK(oracle::naive_rank(disp.phi[0]) == 8);
  CHECK(oracle::naive_rank(disp.psi[3]) == 8);
  for (int e = 1; e <= 3; ++e) CHECK(oracle::naive_rank(disp.phi[static_cast<size_t>(e)]) == 0);
}

TEST_CASE("module suites on small graphs") {
  for (const char* desc : {"cycle:8", "hamming:3,3", "cycle:6", "johnson:6,3"}) {
    CAPTURE(desc);
    Setup h = setup(desc);
    Decomposition dec;
    CheckLog log = full_suite(h, dec);
    require_all_pass(log);
    Index total = 0;
    for (const auto& w : dec.modules) total += w.dim();
    CHECK(total == h.s.n);
    CHECK(dec.modules.front().rho == 0);
    CHECK(dec.modules.front().dim() == h.s.D + 1);
    // every module starts with a one-dimensional E*_rho part
    for (const auto& w : dec.modules) CHECK(w.star_dims[static_cast<size_t>(w.rho)] == 1);
  }
}

TEST_CASE("decomposition is deterministic") {
  Setup h = setup("hamming:3,3");
  ModuleContext ctx(h.s, h.dual, h.g, h.dd);
  Decomposition a = decompose(ctx), b = decompose(ctx);
  REQUIRE(a.modules.size() == b.modules.size());
  for (size_t k = 0; k < a.modules.size(); ++k) CHECK(a.modules[k].basis == b.modules[k].basis);
}

TEST_CASE("module errors") {
  Setup h = setup("hamming:3,2");
  ModuleContext ctx(h.s, h.dual, h.g, h.dd);
  try {
    decompose(ctx, 1, 0);
    FAIL("no draws allowed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotFullySplit);
  }
  TModule bad;
  ExactMat v = ExactMat::Zero(8, 2);
  v(0, 0) = 1;  // shell 0
  v(7, 1) = 1;  // shell 3
  bad.basis = Subspace<Scalar>::span(v, ExactBackend());
  CHECK_THROWS_AS(module_stats(bad, ctx), Error);

  Setup big = setup("hamming:4,3");
  try {
    ModuleContext too_big(big.s, big.dual, big.g, big.dd);
    FAIL("81 vertices accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SuiteInapplicable);
  }
}

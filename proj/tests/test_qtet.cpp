#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "splitdec/qtet.hpp"

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

ClassicalParams params_for(const Setup& h, int qsign) {
  ClassicalParams p = detect_classical(h.in, qsign);
  fit_alpha(p, h.s, h.dual);
  return p;
}

// c_i = b^{i-1} + ... + b^{2i-2}, b_i from the product, both by plain loops
Rational c_by_sum(long b, int i) {
  Rational acc(0), pw(1);
  for (int k = 0; k < i - 1; ++k) pw *= b;
  for (int k = 0; k < i; ++k) {
    acc += pw;
    pw *= b;
  }
  return acc;
}

// [n]_q = q^{n-1} + q^{n-3} + ... + q^{1-n}
Scalar qint_by_sum(const GroundField& f, long n) {
  Scalar acc(0);
  for (long k = 0; k < n; ++k) acc += f.qpow(n - 1 - 2 * k);
  return acc;
}

}  // namespace

TEST_CASE("closed forms and q-integers") {
  for (long b : {2L, -2L, 3L, -3L})
    for (int i = 0; i <= 5; ++i) CHECK(classical_c(b, i) == c_by_sum(b, i));
  // b_i = (beta + 1 - b^i)(b^{D-1} + ... + b^i)
  for (long b : {2L, -2L})
    for (int i = 0; i <= 3; ++i) {
      Rational geo(0), pw(1);
      for (int k = 0; k < 3; ++k) {
        if (k >= i) geo += pw;
        pw *= b;
      }
      Rational bi(1);
      for (int k = 0; k < i; ++k) bi *= b;
      CHECK(classical_b(b, Rational(7), 3, i) == (Rational(8) - bi) * geo);
    }
  const GroundField f2(2);
  CHECK(f2.qint(3) == Scalar(Rational(7, 2)));
  CHECK(qint_by_sum(f2, 3) == Scalar(Rational(7, 2)));
  for (long b : {2L, -2L, 3L})
    for (int sign : {1, -1}) {
      const GroundField f(b, sign);
      for (long n = 1; n <= 4; ++n) CHECK(f.qint(n) == qint_by_sum(f, n));
    }
}

TEST_CASE("classical parameter detection") {
  {
    Graph g = build_family("bilinear:3,3,2");
    DistanceData dd = distance_data(g);
    ClassicalParams p = detect_classical(intersection_numbers(g, dd));
    CHECK(p.D == 3);
    CHECK(p.b == 2);
    CHECK(p.alpha == 1);
    CHECK(p.beta == 7);
    CHECK(p.branch() == "b>1");
    REQUIRE(p.candidates.size() == 2);
    bool rejected = false;
    for (const auto& c : p.candidates)
      if (c.rfind("b = -3:", 0) == 0) rejected = c.find("c_3 would be 63, graph has 28") != std::string::npos;
    CHECK(rejected);
  }
  {
    Graph g = build_family("hermitian:3,2");
    DistanceData dd = distance_data(g);
    IntersectionData in = intersection_numbers(g, dd);
    CHECK(in.b == std::vector<long>{21, 20, 16, 0});
    CHECK(in.c == std::vector<long>{0, 1, 2, 12});
    ClassicalParams p = detect_classical(in);
    CHECK(p.b == -2);
    CHECK(p.alpha == -3);
    CHECK(p.beta == 7);
    CHECK(p.branch() == "b<-1");
  }
  {
    Graph g = build_family("hamming:3,2");
    DistanceData dd = distance_data(g);
    IntersectionData in = intersection_numbers(g, dd);
    try {
      detect_classical(in);
      FAIL("hypercube accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::BEqualsOne);
      CHECK(std::string(e.what()).find("c_3 would be 12, graph has 3") != std::string::npos);
    }
  }
  {
    Graph g = build_family("johnson:6,3");
    DistanceData dd = distance_data(g);
    CHECK_THROWS_AS(detect_classical(intersection_numbers(g, dd)), Error);
  }
  {
    Graph g = build_family("cycle:8");
    DistanceData dd = distance_data(g);
    try {
      detect_classical(intersection_numbers(g, dd));
      FAIL("cycle accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotClassicalAlphaBMinusOne);
    }
  }
}

TEST_CASE("alpha fit on synthetic eigenvalues") {
  ClassicalParams p;
  p.D = 3;
  p.b = 2;
  p.field = GroundField(2);
  SchemeData s;
  s.D = 3;
  DualData dual;
  dual.D = 3;
  for (int i = 0; i <= 3; ++i) {
    s.theta.push_back(p.field.qpow(3 - 2 * i));
    dual.thetastar.push_back(p.field.qpow(3 - 2 * i));
  }
  CheckLog log;
  fit_alpha(p, s, dual, &log);
  CHECK(p.alpha0 == Scalar(0));
  CHECK(p.alpha1 == Scalar(1));
  require_all_pass(log);
  for (const auto& c : log.checks()) CHECK(c.branch == "b>1");

  dual.thetastar[2] = dual.thetastar[2] + Scalar(1);
  try {
    fit_alpha(p, s, dual);
    FAIL("fit accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AlphaFitFailure);
    CHECK(std::string(e.what()).find("theta*_2") != std::string::npos);
  }
}

TEST_CASE("probe blocks are seeded and nested") {
  ExactBackend be;
  Probe a{false, 4, 7}, b{false, 6, 7}, c{false, 4, 8};
  ExactMat va = probe_block(10, a, be), vb = probe_block(10, b, be);
  CHECK(va == ExactMat(vb.leftCols(4)));
  CHECK(va == probe_block(10, a, be));
  CHECK(va != probe_block(10, c, be));
  CHECK(probe_block(5, Probe{true}, be) == identity<Scalar>(5));
  CHECK(a.label() == "sample:4:7");
  CHECK(Probe{true}.label() == "full");
}

TEST_CASE("bilinear forms 3x3 over GF(2), exact probe") {
  Setup h = setup("bilinear:3,3,2");
  ClassicalParams p = params_for(h, 1);
  CHECK(p.alpha1 != Scalar(0));
  ExactBackend be(p.field);
  SplitSystem<Scalar> split(h.s, h.dual, h.dd, be);
  CheckLog log;
  QTetSystem<Scalar> sys = build_qtet(p, h.s, h.dual, h.g, split, be, &log);
  REQUIRE(log.checks().size() == 3);
  check_tables(sys, be, log);

  std::mt19937_64 rng(5);
  const ExactMat v = oracle::random_matrix(rng, GroundField(), 512, 10, 5);

  // Phi v and Psi v rebuilt from cell components found by solving against C
  const int D = 3;
  for (auto [name, grid] : {std::pair{"Phi", sys.dd}, std::pair{"Psi", sys.du}}) {
    CAPTURE(name);
    std::vector<ExactMat> comp = components_by_solve(*grid, v, be);
    ExactMat want = ExactMat::Zero(512, 10);
    for (int i = 0; i <= D; ++i)
      for (int j = 0; j <= D; ++j) want += scale(comp[static_cast<size_t>(i * (D + 1) + j)], p.field.qpow(i + j - D));
    CHECK(sys.M(name).apply(v, be) == want);
  }
  // K^t v against (K*)^-1 v, the inverse taken cellwise after a solve against C
  {
    std::vector<ExactMat> comp = components_by_solve(*sys.uu, v, be);
    ExactMat want = ExactMat::Zero(512, 10);
    for (int i = 0; i <= D; ++i)
      for (int j = 0; j <= D; ++j) want += scale(comp[static_cast<size_t>(i * (D + 1) + j)], p.field.qpow(j - i));
    CHECK(sys.M("K").transpose().apply(v, be) == want);
  }
  // x02 chain against K (Psi^-1 v), each factor from solved components
  {
    auto by_solve = [&](const SplitGrid<Scalar>& g, const ExactMat& x, auto expo) {
      std::vector<ExactMat> comp = components_by_solve(g, x, be);
      ExactMat out = ExactMat::Zero(512, x.cols());
      for (int i = 0; i <= D; ++i)
        for (int j = 0; j <= D; ++j) out += scale(comp[static_cast<size_t>(i * (D + 1) + j)], p.field.qpow(expo(i, j)));
      return out;
    };
    const ExactMat psi_inv_v = by_solve(*sys.du, v, [D](int i, int j) { return D - i - j; });
    CHECK(sys.x("x02").apply(v, be) == by_solve(*sys.dd, psi_inv_v, [](int i, int j) { return i - j; }));
    CHECK(sys.x("x02").apply(sys.x("x20").apply(v, be), be) == v);
    CHECK(sys.x("x13").apply(sys.x("x31").apply(v, be), be) == v);
  }

  const ExactMat w = probe_block(512, Probe{false, 4, 42}, be);
  check_transpose_suite(sys, w, "probe", be, log);
  ClassicalParams pp = params_for(h, -1);
  QTetSystem<Scalar> prime = build_qtet(pp, h.s, h.dual, h.g, split, ExactBackend(pp.field));
  check_conjugate_suite(sys, prime, w, "probe", be, log);
  check_boxtimes_relations(sys, w, "probe", be, log);
  check_generator_symmetries(sys, prime, w, "probe", be, log);
  require_all_pass(log);
  int rel1 = 0, rel2 = 0, rel3 = 0;
  for (const auto& c : log.checks()) {
    CHECK(c.branch == "b>1");
    CHECK(c.max_residual == "0");
    rel1 += c.name.find(".rel1.") != std::string::npos;
    rel2 += c.name.find(".rel2.") != std::string::npos;
    rel3 += c.name.find(".rel3.") != std::string::npos;
  }
  CHECK(rel1 == 4);
  CHECK(rel2 == 12);
  CHECK(rel3 == 4);
}

TEST_CASE("hermitian forms 3x3 over GF(4), exact probe and conjugation") {
  Setup h = setup("hermitian:3,2");
  ClassicalParams p = params_for(h, 1);
  ClassicalParams pp = params_for(h, -1);
  CHECK(pp.field.q() == -p.field.q());
  CHECK(conj(p.field.q()) == pp.field.q());
  ExactBackend be(p.field);
  SplitSystem<Scalar> split(h.s, h.dual, h.dd, be);
  CheckLog log;
  QTetSystem<Scalar> sys = build_qtet(p, h.s, h.dual, h.g, split, be, &log);
  QTetSystem<Scalar> prime = build_qtet(pp, h.s, h.dual, h.g, split, ExactBackend(pp.field), &log);
  check_tables(sys, be, log);

  const ExactMat w = probe_block(512, Probe{false, 4, 42}, be);
  check_transpose_suite(sys, w, "probe", be, log);
  check_conjugate_suite(sys, prime, w, "probe", be, log);
  check_boxtimes_relations(sys, w, "probe", be, log);
  check_generator_symmetries(sys, prime, w, "probe", be, log);
  require_all_pass(log);
  bool saw_conj_K = false, saw_parity = false;
  for (const auto& c : log.checks()) {
    CHECK(c.branch == "b<-1");
    CHECK(c.name.find(".real.") == std::string::npos);
    saw_conj_K |= c.name == "qtet.probe.conj.K";
    saw_parity |= c.name == "qtet.probe.parity.A" && c.anchor == "A' = -A";
  }
  CHECK(saw_conj_K);
  CHECK(saw_parity);
  // conj(K) is not K itself here
  const ExactMat kv = sys.M("K").apply(w, be);
  CHECK(ExactMat(conj(kv)) != kv);
}

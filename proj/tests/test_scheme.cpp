#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "splitdec/scheme.hpp"

#ifndef SPLITDEC_TEST_DATA
#define SPLITDEC_TEST_DATA "tests/data"
#endif

using namespace splitdec;

namespace {

struct Built {
  Graph g;
  DistanceData dd;
  IntersectionData in;
  SchemeData s;
};

Built build(const Graph& g, CheckLog* log = nullptr) {
  DistanceData dd = distance_data(g);
  IntersectionData in = intersection_numbers(g, dd);
  GroundField f = natural_field(in);
  SchemeData s = build_scheme(in, dd, f, log);
  return {g, std::move(dd), std::move(in), std::move(s)};
}

// Roots of an integer polynomial among the divisors of the constant term.
std::vector<long> rational_roots(const std::vector<Integer>& p) {
  std::vector<long> out;
  std::vector<Integer> cur = p;
  while (cur.size() > 1) {
    size_t z = 0;
    while (z < cur.size() && sgn(cur[z]) == 0) ++z;
    if (z > 0) {
      out.push_back(0);
      cur.erase(cur.begin());
      continue;
    }
    const long c = std::labs(cur[0].get_si());
    bool found = false;
    for (long d = 1; d <= c && !found; ++d) {
      if (c % d) continue;
      for (long cand : {d, -d}) {
        Integer v = 0;
        for (size_t k = cur.size(); k-- > 0;) v = v * cand + cur[k];
        if (v == 0) {
          out.push_back(cand);
          std::vector<Integer> q(cur.size() - 1);
          Integer carry = 0;
          for (size_t k = cur.size(); k-- > 1;) {
            carry = carry * cand + cur[k];
            q[k - 1] = carry;
          }
          cur = q;
          found = true;
          break;
        }
      }
    }
    if (!found) break;
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

ExactMat dense_product(const ExactMat& a, const ExactMat& b) { return oracle::naive_matmul(a, b); }

}  // namespace

TEST_CASE("hypercube eigenvalues match the rational root oracle") {
  Built h = build(build_family("hamming:3,2"));
  std::vector<long> roots = rational_roots(char_poly(h.in));
  REQUIRE(roots == std::vector<long>{3, 1, -1, -3});
  for (size_t i = 0; i < roots.size(); ++i) CHECK(h.s.theta[i] == Scalar(roots[i]));
  CHECK(h.s.m == std::vector<long>{1, 3, 3, 1});
}

TEST_CASE("idempotents against dense oracles") {
  Built h = build(build_family("hamming:3,2"));
  ExactMat a1 = h.dd.A(1);
  ExactMat total = ExactMat::Zero(8, 8), spectral = ExactMat::Zero(8, 8);
  for (int i = 0; i <= h.s.D; ++i) {
    ExactMat e = h.s.E(i, h.dd);
    // trace oracle
    CHECK(trace(e) == Scalar(h.s.m[static_cast<size_t>(i)]));
    CHECK(oracle::naive_rank(e) == h.s.m[static_cast<size_t>(i)]);
    for (int j = 0; j <= h.s.D; ++j) {
      ExactMat p = dense_product(e, h.s.E(j, h.dd));
      CHECK(p == (i == j ? e : ExactMat(ExactMat::Zero(8, 8))));
    }
    total = add(total, e);
    spectral = add(spectral, scale(e, h.s.theta[static_cast<size_t>(i)]));
  }
  CHECK(total == identity<Scalar>(8));
  CHECK(spectral == a1);
  CHECK(h.s.E(0, h.dd) == scale(all_ones<Scalar>(8, 8), Scalar(Rational(1, 8))));
}

TEST_CASE("krein parameters by direct expansion") {
  Built h = build(build_family("hamming:3,2"));
  const int w = h.s.D + 1;
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < w; ++j) {
      // q^0_ij = delta_ij m_i
      CHECK(h.s.q(0, i, j) == (i == j ? Scalar(h.s.m[static_cast<size_t>(i)]) : Scalar(0)));
      ExactMat lhs = scale(hadamard(h.s.E(i, h.dd), h.s.E(j, h.dd)), Scalar(8));
      ExactMat rhs = ExactMat::Zero(8, 8);
      for (int k = 0; k < w; ++k) rhs = add(rhs, scale(h.s.E(k, h.dd), h.s.q(k, i, j)));
      CHECK(lhs == rhs);
      for (int k = 0; k < w; ++k) CHECK(h.s.q(k, i, j) == Scalar(h.in(k, i, j)));
    }
  CHECK(check_self_dual(h.s, {0, 1, 2, 3}, h.in).pass);
}

TEST_CASE("Q-polynomial orderings") {
  Built h = build(build_family("hamming:3,2"));
  auto ho = find_qpoly_orderings(h.s);
  CHECK(std::find(ho.begin(), ho.end(), std::vector<int>{0, 1, 2, 3}) != ho.end());

  Built c8 = build(build_family("cycle:8"));
  auto co = find_qpoly_orderings(c8.s);
  CHECK(!co.empty());
  for (const auto& o : co) CHECK(o.front() == 0);

  Built pet = build(graph_from_file(std::string(SPLITDEC_TEST_DATA) + "/petersen.txt"));
  CHECK(!find_qpoly_orderings(pet.s).empty());
  CHECK(pet.s.theta == std::vector<Scalar>{Scalar(3), Scalar(1), Scalar(-2)});
  CHECK(pet.s.m == std::vector<long>{1, 5, 4});
}

TEST_CASE("quadratic eigenvalues") {
  // C_5 has eigenvalues 2 and (-1 +- sqrt 5)/2
  Built c5 = build(build_family("cycle:5"));
  CHECK(c5.s.field.b() == 5);
  CHECK(c5.s.theta[1] == c5.s.field.make(Rational(-1, 2), Rational(1, 2)));
  CHECK(c5.s.theta[2] == c5.s.field.make(Rational(-1, 2), Rational(-1, 2)));
  CHECK(c5.s.m == std::vector<long>{1, 2, 2});
  try {
    eigenvalues_A1(c5.in, GroundField(2));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EigenvalueNotInField);
  }
  // a non-squarefree radicand with the same squarefree part works
  auto t = eigenvalues_A1(c5.in, GroundField(20));
  CHECK(t[1] == GroundField(20).make(Rational(-1, 2), Rational(1, 4)));
}

TEST_CASE("self-duality of the forms graphs") {
  for (const char* d : {"bilinear:3,3,2", "hermitian:3,2"}) {
    CAPTURE(d);
    CheckLog log;
    Built b = build(build_family(d), &log);
    CHECK(log.all_pass());
    CHECK(b.s.theta[0] == Scalar(b.in.valency()));
    OrderingChoice c = select_ordering(b.s, b.in);
    CHECK(c.self_dual);
    CHECK(check_self_dual(b.s, c.ordering, b.in).pass);
    long total = 0;
    for (long m : b.s.m) total += m;
    CHECK(total == 512);
  }
}

TEST_CASE("non self-dual negative control") {
  Built j = build(build_family("johnson:6,3"));
  auto orders = find_qpoly_orderings(j.s);
  REQUIRE(!orders.empty());
  SelfDualResult r = check_self_dual(j.s, orders.front(), j.in);
  CHECK(!r.pass);
  CHECK(r.witness.find("q^") == 0);
  OrderingChoice c = select_ordering(j.s, j.in);
  CHECK(!c.self_dual);
  CHECK(c.ordering == orders.front());
  CHECK_THROWS_AS(select_ordering(j.s, j.in, std::vector<int>{0, 2, 1, 3}), Error);
}

TEST_CASE("dual data at a base vertex") {
  Built h = build(build_family("hamming:3,2"));
  CheckLog log;
  DualData dv = dual_data(h.s, h.g, h.dd, 0, &log);
  CHECK(log.all_pass());
  CHECK(dv.thetastar == std::vector<Scalar>{Scalar(3), Scalar(1), Scalar(-1), Scalar(-3)});
  ExactMat total = ExactMat::Zero(8, 8);
  for (int i = 0; i <= 3; ++i) total = add(total, dv.Estar(i));
  CHECK(total == identity<Scalar>(8));
  CHECK(dv.Astar(0) == identity<Scalar>(8));
  ExactMat s = ExactMat::Zero(8, 8);
  for (int i = 0; i <= 3; ++i) s = add(s, scale(dv.Estar(i), dv.thetastar[static_cast<size_t>(i)]));
  CHECK(s == dv.Astar(1));
  // (A*_i)_yy = |X| (E_i)_xy against the dense idempotent
  for (int i = 0; i <= 3; ++i) {
    ExactMat e = h.s.E(i, h.dd);
    for (int y = 0; y < 8; ++y) CHECK(dv.Astar(i)(y, y) == e(0, y) * Scalar(8));
  }
  CHECK_THROWS_AS(dual_data(h.s, h.g, h.dd, 8), Error);

  // a wrong scheme (idempotents swapped) violates the product rule or constancy
  SchemeData bad = reorder(h.s, {0, 2, 1, 3});
  bad.krein = h.s.krein;
  CHECK_THROWS_AS(dual_data(bad, h.g, h.dd, 0), Error);
}

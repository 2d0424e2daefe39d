#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "splitdec/graphs.hpp"

#ifndef SPLITDEC_TEST_DATA
#define SPLITDEC_TEST_DATA "tests/data"
#endif

using namespace splitdec;

namespace {

std::string data(const char* name) { return std::string(SPLITDEC_TEST_DATA) + "/" + name; }

long ipow(long b, int e) {
  long r = 1;
  for (int k = 0; k < e; ++k) r *= b;
  return r;
}

// c_i and b_i from the classical-parameter closed forms with alpha = b - 1.
long closed_c(long b, int i) { return ipow(b, i - 1) * (ipow(b, i) - 1) / (b - 1); }
long closed_b(long b, long beta, int D, int i) { return (beta + 1 - ipow(b, i)) * (ipow(b, D) - ipow(b, i)) / (b - 1); }

// (A_1 A_i)_{xy} counted directly against the three-term expansion.
void check_recurrence(const Graph& g, const DistanceData& dd, const IntersectionData& in) {
  for (int i = 0; i <= dd.D; ++i)
    for (int x = 0; x < g.n; ++x)
      for (int y = 0; y < g.n; ++y) {
        long lhs = 0;
        for (int z : g.adj[static_cast<size_t>(x)]) lhs += dd(z, y) == i;
        const int h = dd(x, y);
        long rhs = 0;
        if (h == i - 1) rhs = in.b[static_cast<size_t>(i - 1)];
        if (h == i) rhs = in.a[static_cast<size_t>(i)];
        if (h == i + 1) rhs = in.c[static_cast<size_t>(i + 1)];
        REQUIRE(lhs == rhs);
      }
}

void check_partition(const DistanceData& dd) {
  ExactMat total = ExactMat::Zero(dd.n, dd.n);
  std::vector<ExactMat> as;
  for (int i = 0; i <= dd.D; ++i) {
    as.push_back(dd.A(i));
    total = add(total, as.back());
  }
  CHECK(total == all_ones<Scalar>(dd.n, dd.n));
  CHECK(as[0] == identity<Scalar>(dd.n));
  for (int i = 0; i <= dd.D; ++i) {
    CHECK(as[static_cast<size_t>(i)] == as[static_cast<size_t>(i)].transpose());
    for (int j = 0; j <= dd.D; ++j) {
      ExactMat h = hadamard(as[static_cast<size_t>(i)], as[static_cast<size_t>(j)]);
      CHECK(h == (i == j ? as[static_cast<size_t>(i)] : ExactMat(ExactMat::Zero(dd.n, dd.n))));
    }
  }
}

}  // namespace

TEST_CASE("finite field tables satisfy the axioms") {
  for (int q : {2, 3, 4, 5, 7, 8, 9}) {
    FiniteField f(q);
    for (int x = 0; x < q; ++x) {
      CHECK(f.add(x, 0) == x);
      CHECK(f.mul(x, 1) == x);
      CHECK(f.add(x, f.neg(x)) == 0);
      if (x) CHECK(f.mul(x, f.inv(x)) == 1);
      for (int y = 0; y < q; ++y) {
        CHECK(f.add(x, y) == f.add(y, x));
        CHECK(f.mul(x, y) == f.mul(y, x));
        CHECK(f.frobenius(f.mul(x, y)) == f.mul(f.frobenius(x), f.frobenius(y)));
        CHECK(f.frobenius(f.add(x, y)) == f.add(f.frobenius(x), f.frobenius(y)));
        for (int z = 0; z < q; ++z) {
          CHECK(f.mul(f.mul(x, y), z) == f.mul(x, f.mul(y, z)));
          CHECK(f.add(f.add(x, y), z) == f.add(x, f.add(y, z)));
          CHECK(f.mul(x, f.add(y, z)) == f.add(f.mul(x, y), f.mul(x, z)));
        }
      }
    }
    // no zero divisors
    for (int x = 1; x < q; ++x)
      for (int y = 1; y < q; ++y) CHECK(f.mul(x, y) != 0);
  }
  CHECK_THROWS_AS(FiniteField(6), Error);
}

TEST_CASE("hypercube") {
  Graph g = build_family("hamming:3,2");
  CHECK(g.n == 8);
  for (const auto& l : g.adj) CHECK(l.size() == 3);
  DistanceData dd = distance_data(g);
  CHECK(dd.D == 3);
  IntersectionData in = intersection_numbers(g, dd);
  CHECK(in.array_string() == "{3,2,1;1,2,3}");
  check_partition(dd);
  check_recurrence(g, dd, in);
  for (int h = 0; h <= 3; ++h)
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; j <= 3; ++j) CHECK(in(h, i, j) == in(h, j, i));
}

TEST_CASE("cycles and johnson graphs") {
  Graph c8 = build_family("cycle:8");
  DistanceData dd = distance_data(c8);
  CHECK(dd.D == 4);
  IntersectionData in = intersection_numbers(c8, dd);
  CHECK(in.array_string() == "{2,1,1,1;1,1,1,2}");
  check_partition(dd);
  check_recurrence(c8, dd, in);

  Graph j = build_family("johnson:6,3");
  CHECK(j.n == 20);
  DistanceData jd = distance_data(j);
  CHECK(jd.D == 3);
  IntersectionData ji = intersection_numbers(j, jd);
  CHECK(ji.array_string() == "{9,4,1;1,4,9}");
  check_recurrence(j, jd, ji);
  CHECK_THROWS_AS(build_family("cycle:2"), Error);
  CHECK_THROWS_AS(build_family("dual-polar:3,2"), Error);
}

TEST_CASE("bilinear forms graph") {
  Graph g = build_family("bilinear:3,3,2");
  CHECK(g.n == 512);
  CHECK(g.labels[0] == "[0 0 0;0 0 0;0 0 0]");
  // rank-1 3x3 matrices over GF(2): (2^3 - 1)^2
  for (const auto& l : g.adj) REQUIRE(l.size() == 49);
  DistanceData dd = distance_data(g);
  CHECK(dd.D == 3);
  CHECK(dd.sphere_sizes(0) == std::vector<int>{1, 49, 294, 168});
  IntersectionData in = intersection_numbers(g, dd);
  CHECK(in.array_string() == "{49,36,16;1,6,28}");
  check_recurrence(g, dd, in);
  const long b = 2, beta = 7;
  for (int i = 0; i <= 3; ++i) {
    if (i > 0) CHECK(in.c[static_cast<size_t>(i)] == closed_c(b, i));
    CHECK(in.b[static_cast<size_t>(i)] == closed_b(b, beta, 3, i));
  }
  std::mt19937_64 rng(1);
  for (int t = 0; t < 5; ++t) {
    int x = static_cast<int>(rng() % 512);
    CHECK(dd.sphere_sizes(x) == dd.sphere_sizes(0));
  }
}

TEST_CASE("hermitian forms graph") {
  Graph g = build_family("hermitian:3,2");
  CHECK(g.n == 512);
  for (const auto& l : g.adj) REQUIRE(l.size() == 21);
  DistanceData dd = distance_data(g);
  CHECK(dd.D == 3);
  IntersectionData in = intersection_numbers(g, dd);
  CHECK(in.array_string() == "{21,20,16;1,2,12}");
  const long b = -2, beta = 7;  // beta = -(-r)^d - 1
  for (int i = 0; i <= 3; ++i) {
    if (i > 0) CHECK(in.c[static_cast<size_t>(i)] == closed_c(b, i));
    CHECK(in.b[static_cast<size_t>(i)] == closed_b(b, beta, 3, i));
  }
  std::mt19937_64 rng(2);
  for (int t = 0; t < 5; ++t) {
    int x = static_cast<int>(rng() % 512);
    CHECK(dd.sphere_sizes(x) == dd.sphere_sizes(0));
  }
}

TEST_CASE("small forms graphs match their closed forms") {
  // Bil(2x2,3): b = 3, beta = 3^2 - 1; Her(2,3): b = -3, beta = -(-3)^2 - 1
  Graph bil = build_family("bilinear:2,2,3");
  IntersectionData bi = intersection_numbers(bil, distance_data(bil));
  Graph her = build_family("hermitian:2,3");
  IntersectionData hi = intersection_numbers(her, distance_data(her));
  for (int i = 0; i <= 2; ++i) {
    if (i > 0) {
      CHECK(bi.c[static_cast<size_t>(i)] == closed_c(3, i));
      CHECK(hi.c[static_cast<size_t>(i)] == closed_c(-3, i));
    }
    CHECK(bi.b[static_cast<size_t>(i)] == closed_b(3, 8, 2, i));
    CHECK(hi.b[static_cast<size_t>(i)] == closed_b(-3, -10, 2, i));
  }
}

TEST_CASE("graph files") {
  Graph c4 = graph_from_file(data("c4.txt"));
  CHECK(c4.n == 4);
  CHECK(intersection_numbers(c4, distance_data(c4)).array_string() == "{2,1;1,2}");
  Graph pet = graph_from_file(data("petersen.txt"));
  CHECK(intersection_numbers(pet, distance_data(pet)).array_string() == "{3,2;1,1}");
  try {
    graph_from_file(data("loop.txt"));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LoopOrMultiEdge);
  }
  try {
    graph_from_file(data("two_edges.txt"));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Disconnected);
  }
  try {
    graph_from_text("3\n0 1\n1 x\n");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(graph_from_text("3\n0 1\n1 0\n1 2\n"), Error);
}

TEST_CASE("non distance-regular input is rejected") {
  // path on 4 vertices: connected but not distance-regular
  Graph p = graph_from_text("4\n0 1\n1 2\n2 3\n");
  try {
    intersection_numbers(p, distance_data(p));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotDistanceRegular);
  }
}

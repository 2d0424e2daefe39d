#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "splitdec/subspace.hpp"

using namespace splitdec;

namespace {

Scalar rat(long p, long q = 1) { return Scalar(Rational(p, q)); }

}  // namespace

TEST_CASE("scalar arithmetic") {
  GroundField f2(2), fm2(-2);
  Scalar q = f2.q();
  CHECK((rat(1) + q) * (rat(1) - q) == rat(-1));
  CHECK(fm2.q() * fm2.q() == rat(-2));
  Scalar inv = rat(1) / q;
  CHECK(inv == f2.make(0, Rational(1, 2)));
  CHECK(q * inv == rat(1));
  CHECK_THROWS_AS(rat(1) / rat(0), Error);
  try {
    (void)(q / Scalar());
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DivideByZero);
  }
}

TEST_CASE("conj and sigma") {
  GroundField f2(2), fm2(-2), f4(4);
  Scalar s = f2.make(3, 2);
  CHECK(conj(s) == s);
  Scalar t = fm2.make(3, 2);
  CHECK(conj(t) == fm2.make(3, -2));
  CHECK(conj(rat(5)) == rat(5));
  CHECK(f2.sigma(f2.make(3, 1)) == f2.make(3, -1));
  CHECK(f2.sigma(f2.sigma(s)) == s);

  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    Scalar a = oracle::random_scalar(rng, fm2), b = oracle::random_scalar(rng, fm2);
    CHECK(fm2.sigma(a) == conj(a));
    CHECK(conj(a * b) == conj(a) * conj(b));
    CHECK(conj(a + b) == conj(a) + conj(b));
    Scalar c = oracle::random_scalar(rng, f2), d = oracle::random_scalar(rng, f2);
    CHECK(conj(c) == c);
    CHECK(f2.sigma(c * d) == f2.sigma(c) * f2.sigma(d));
    CHECK(f2.sigma(c + d) == f2.sigma(c) + f2.sigma(d));
  }
  try {
    f4.sigma(rat(1));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CalledInRationalMode);
  }
}

TEST_CASE("rational mode folds q") {
  GroundField f4(4), f4m(4, -1);
  CHECK(f4.mode() == FieldMode::rational);
  CHECK(f4.q() == rat(2));
  CHECK(f4m.q() == rat(-2));
  CHECK(f4.q().is_rational());
  CHECK(GroundField(-4).mode() == FieldMode::quadratic);
  CHECK_THROWS_AS(GroundField(0), Error);
}

TEST_CASE("qpow") {
  GroundField f2(2), fm2(-2);
  CHECK(f2.qpow(4) == rat(4));
  CHECK(f2.qpow(-1) == f2.make(0, Rational(1, 2)));
  CHECK(f2.q() * f2.qpow(-1) == rat(1));
  CHECK(fm2.qpow(3) == fm2.make(0, -2));
  for (long n = -6; n <= 6; ++n) {
    Scalar direct = rat(1);
    Scalar base = n >= 0 ? f2.q() : f2.q().inverse();
    for (long k = 0; k < (n >= 0 ? n : -n); ++k) direct *= base;
    CHECK(f2.qpow(n) == direct);
  }
  // [3]_q = q^2 + 1 + q^-2
  CHECK(f2.qint(3) == rat(7, 2));
  GroundField f2m = f2.flipped();
  CHECK(f2m.q() == -f2.q());
  CHECK(f2m.qint(3) == f2.qint(3));
}

TEST_CASE("field axioms on random triples") {
  std::mt19937_64 rng(2024);
  for (long b : {2L, -2L, 5L, 9L}) {
    GroundField f(b);
    for (int k = 0; k < 250; ++k) {
      Scalar x = oracle::random_scalar(rng, f), y = oracle::random_scalar(rng, f), z = oracle::random_scalar(rng, f);
      CHECK((x + y) + z == x + (y + z));
      CHECK((x * y) * z == x * (y * z));
      CHECK(x * (y + z) == x * y + x * z);
      CHECK(x * y == y * x);
      if (!x.is_zero()) CHECK(x * x.inverse() == rat(1));
    }
  }
}

TEST_CASE("scalar text encoding") {
  GroundField f2(2);
  CHECK(format(f2.make(Rational(1, 2), -3)) == "1/2-3*r");
  CHECK(format(f2.make(0, 1)) == "0+1*r");
  CHECK(format(rat(-7, 3)) == "-7/3");
  for (const char* s : {"1/2-3*r", "0+1*r", "-7/3", "5", "-1/4+2/3*r"}) {
    CHECK(format(parse_scalar(s, f2)) == s);
  }
  CHECK_THROWS_AS(parse_scalar("1+2*q", f2), Error);
  CHECK_THROWS_AS(parse_scalar("1+2*r", GroundField(4)), Error);
}

TEST_CASE("matrix basics") {
  std::mt19937_64 rng(11);
  GroundField f(2);
  ExactMat m = oracle::random_matrix(rng, f, 3, 3);
  CHECK(matmul(identity<Scalar>(3), m) == m);
  CHECK_THROWS_AS(matmul(m, ExactMat(2, 2)), Error);
  CHECK_THROWS_AS(add(m, ExactMat(2, 3)), Error);

  GroundField fm(-2);
  ExactMat one(1, 1);
  one(0, 0) = fm.q();
  CHECK(conj_transpose(one)(0, 0) == -fm.q());

  // large enough for the scaled-integer route, both with and without root parts
  for (GroundField g : {GroundField(2), GroundField(-3), GroundField(9)}) {
    ExactMat a = oracle::random_matrix(rng, g, 23, 19), b = oracle::random_matrix(rng, g, 19, 21);
    CHECK(matmul(a, b) == oracle::naive_matmul(a, b));
  }
  ExactMat big = oracle::random_matrix(rng, GroundField(1), 20, 20, 1 << 30);
  for (Index k = 0; k < big.size(); k += 7) big.data()[k] *= Scalar(Rational(Integer("123456789012345678901234567890")));
  CHECK(matmul(big, big) == oracle::naive_matmul(big, big));
}

TEST_CASE("matrix dump round trip") {
  std::mt19937_64 rng(5);
  for (GroundField g : {GroundField(2, -1), GroundField(-2), GroundField(4)}) {
    ExactMat m = oracle::random_matrix(rng, g, 4, 3);
    std::string text = dump_matrix(m, g);
    GroundField back;
    ExactMat n = parse_matrix(text, &back);
    CHECK(n == m);
    CHECK(back == g);
    CHECK(dump_matrix(n, back) == text);
  }
  CHECK_THROWS_AS(parse_matrix("2 2 2 rational +1\n1 2\n3 4\n"), Error);
  CHECK_THROWS_AS(parse_matrix("2 2 2 quadratic +1\n1 2\n3\n"), Error);
}

TEST_CASE("rref rank kernel") {
  ExactBackend be;
  ExactMat z = ExactMat::Zero(3, 3);
  CHECK(rank(z, be) == 0);
  CHECK(kernel(z, be).cols() == 3);

  ExactMat ones = all_ones<Scalar>(2, 2);
  CHECK(rank(ones, be) == 1);
  ExactMat k = kernel(ones, be);
  REQUIRE(k.cols() == 1);
  CHECK(k(0, 0) == -k(1, 0));

  GroundField f(2);
  ExactBackend bq(f);
  ExactMat m(2, 2);
  m << f.q(), rat(2), rat(1), f.q();
  CHECK(rank(m, bq) == 1);
  CHECK(is_zero(matmul(m, kernel(m, bq))));
}

TEST_CASE("bareiss agrees with textbook elimination") {
  std::mt19937_64 rng(99);
  for (GroundField g : {GroundField(1), GroundField(2), GroundField(-2), GroundField(5)}) {
    for (int t = 0; t < 12; ++t) {
      Index r = 2 + t % 5, c = 3 + (t * 3) % 6;
      ExactMat m = t % 2 ? oracle::random_low_rank(rng, g, r, c, 1 + t % 3) : oracle::random_matrix(rng, g, r, c);
      std::vector<Index> piv;
      ExactMat expect = oracle::naive_rref(m, &piv);
      Rref<Scalar> got = rref_bareiss(m);
      CHECK(got.R == expect);
      CHECK(got.pivots == piv);
      CHECK(rank(m, ExactBackend(g)) + kernel(m, ExactBackend(g)).cols() == m.cols());
    }
  }
}

TEST_CASE("multimodular agrees with bareiss") {
  std::mt19937_64 rng(3);
  GroundField g(1);
  for (int t = 0; t < 6; ++t) {
    Index r = 20 + 3 * t, c = 24 + t;
    ExactMat m = oracle::random_low_rank(rng, g, r, c, 5 + 2 * t);
    // a few larger entries to force several primes
    m(0, 0) += Scalar(Rational(Integer("98765432109876543210987"), Integer("1234567")));
    Rref<Scalar> mm;
    REQUIRE(rref_multimodular(m, mm));
    Rref<Scalar> bb = rref_bareiss(m);
    CHECK(mm.R == bb.R);
    CHECK(mm.pivots == bb.pivots);
  }
}

TEST_CASE("inverse and solve") {
  std::mt19937_64 rng(8);
  for (GroundField g : {GroundField(1), GroundField(-2)}) {
    ExactBackend be(g);
    ExactMat a = oracle::random_matrix(rng, g, 6, 6);
    ExactMat inv = inverse(a, be);
    CHECK(matmul(a, inv) == identity<Scalar>(6));
  }
  ExactBackend be;
  CHECK_THROWS_AS(inverse(all_ones<Scalar>(3, 3), be), Error);
}

TEST_CASE("subspace operations") {
  ExactBackend be;
  using Sub = Subspace<Scalar>;
  Sub e1 = Sub::coordinate(3, {0}), e2 = Sub::coordinate(3, {1});
  Sub zero(3);
  CHECK(sum(e1, zero, be) == e1);
  CHECK(sum(e1, e2, be).dim() == 2);
  CHECK(sum(e1, e1, be) == e1);
  CHECK(intersect(Sub::coordinate(3, {0, 1}), Sub::coordinate(3, {1, 2}), be) == e2);
  CHECK(intersect(e1, Sub::full(3), be) == e1);
  CHECK_THROWS_AS(sum(e1, Sub(4), be), Error);

  std::mt19937_64 rng(50);
  GroundField g(-2);
  ExactBackend bq(g);
  for (int t = 0; t < 50; ++t) {
    Index n = 6;
    Sub u = Sub::span(oracle::random_low_rank(rng, g, n, 4, 1 + t % 4), bq);
    Sub w = Sub::span(oracle::random_low_rank(rng, g, n, 4, 1 + (t / 4) % 4), bq);
    Sub s = sum(u, w, bq), i = intersect(u, w, bq);
    CHECK(s.dim() + i.dim() == u.dim() + w.dim());
    CHECK(oracle::naive_rank(u.basis()) + oracle::naive_rank(w.basis()) -
              oracle::naive_rank([&] {
                ExactMat both(n, u.dim() + w.dim());
                both << u.basis(), w.basis();
                return both;
              }()) ==
          i.dim());
    CHECK(Sub::span(s.basis(), bq) == s);
    CHECK(u.contains(i, bq));
    CHECK(w.contains(i, bq));
    Sub c = orth_complement_within(u, w, bq);
    CHECK(w.contains(c, bq));
    CHECK(is_zero(matmul(conj_transpose(u.basis()), c.basis())));
  }
}

TEST_CASE("hermitian complement uses conjugation") {
  GroundField g(-2);
  ExactBackend be(g);
  using Sub = Subspace<Scalar>;
  ExactMat v(2, 1);
  v << rat(1), g.q();
  Sub u = Sub::span(v, be);
  Sub c = orth_complement_within(u, Sub::full(2), be);
  REQUIRE(c.dim() == 1);
  // <w, (1, q)> = w0 + w1 * conj(q) = w0 - w1 q, so w = (q, 1) up to scale
  ExactMat w = c.basis();
  CHECK((w(0, 0) * conj(v(0, 0)) + w(1, 0) * conj(v(1, 0))).is_zero());
  ExactMat expect(2, 1);
  expect << g.q(), rat(1);
  CHECK(c == Sub::span(expect, be));
  CHECK(orth_complement_within(Sub(2), Sub::full(2), be) == Sub::full(2));
  Sub coord = Sub::coordinate(4, {1, 3});
  CHECK(orth_complement_within(coord, coord, be).dim() == 0);
}

TEST_CASE("projectors from a direct sum") {
  ExactBackend be;
  using Sub = Subspace<Scalar>;
  std::vector<Sub> cells{Sub::coordinate(2, {0}), Sub::coordinate(2, {1})};
  ExactMat p0 = projector_from_direct_sum(cells, 0, be);
  ExactMat p1 = projector_from_direct_sum(cells, 1, be);
  ExactMat d0 = ExactMat::Zero(2, 2);
  d0(0, 0) = 1;
  CHECK(p0 == d0);
  CHECK(add(p0, p1) == identity<Scalar>(2));

  std::mt19937_64 rng(17);
  GroundField g(2);
  ExactBackend bq(g);
  ExactMat basis = oracle::random_matrix(rng, g, 5, 5);
  std::vector<Sub> skew{Sub::span(basis.leftCols(2), bq), Sub::span(basis.middleCols(2, 1), bq),
                        Sub::span(basis.rightCols(2), bq)};
  ExactMat total = ExactMat::Zero(5, 5);
  for (size_t k = 0; k < skew.size(); ++k) {
    ExactMat p = projector_from_direct_sum(skew, k, bq);
    CHECK(matmul(p, p) == p);
    CHECK(rank(p, bq) == skew[k].dim());
    total = add(total, p);
  }
  CHECK(total == identity<Scalar>(5));
  std::vector<Sub> bad{Sub::coordinate(2, {0}), Sub::coordinate(2, {0})};
  try {
    projector_from_direct_sum(bad, 0, be);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotADirectSum);
  }
}

TEST_CASE("float backend agrees with exact") {
  std::mt19937_64 rng(21);
  for (GroundField g : {GroundField(2), GroundField(-2)}) {
    ExactBackend be(g);
    FloatBackend fb(g, 1e-10);
    for (int t = 0; t < 6; ++t) {
      Index n = 8 + 4 * t;
      ExactMat m = oracle::random_low_rank(rng, g, n, n, n / 2);
      Rref<Scalar> e = be.rref(m);
      Rref<Complex> fl = fb.rref(to_float(m, g));
      CHECK(e.pivots == fl.pivots);
      CHECK(residual(to_float(e.R, g), fl.R) <= 1e-9);
      ExactMat a = oracle::random_matrix(rng, g, n, n);
      CHECK(residual(to_float(inverse(a, be), g), inverse(to_float(a, g), fb)) <= 1e-9);
    }
  }
}

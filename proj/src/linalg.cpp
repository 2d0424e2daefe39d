#include "splitdec/linalg.hpp"

#include <algorithm>

#include "splitdec/detail/intmat.hpp"

namespace splitdec {

namespace {

// x + y*r with integer coordinates.
struct ZR {
  Integer x, y;
  bool zero() const { return sgn(x) == 0 && sgn(y) == 0; }
};

struct ZRing {
  long b;

  ZR mul(const ZR& u, const ZR& v) const {
    if (sgn(u.y) == 0 && sgn(v.y) == 0) return {u.x * v.x, 0};
    return {u.x * v.x + u.y * v.y * b, u.x * v.y + u.y * v.x};
  }

  // piv*a - f*c, divided exactly by prev.
  void combine(ZR& a, const ZR& piv, const ZR& f, const ZR& c, const ZR& prev) const {
    ZR t = mul(piv, a);
    if (!f.zero() && !c.zero()) {
      ZR s = mul(f, c);
      t.x -= s.x;
      t.y -= s.y;
    }
    a = divexact(t, prev);
  }

  ZR divexact(const ZR& u, const ZR& d) const {
    ZR out;
    if (sgn(d.y) == 0) {
      mpz_divexact(out.x.get_mpz_t(), u.x.get_mpz_t(), d.x.get_mpz_t());
      if (sgn(u.y) != 0) mpz_divexact(out.y.get_mpz_t(), u.y.get_mpz_t(), d.x.get_mpz_t());
      return out;
    }
    Integer n = d.x * d.x - d.y * d.y * b;
    ZR num = mul(u, ZR{d.x, -d.y});
    mpz_divexact(out.x.get_mpz_t(), num.x.get_mpz_t(), n.get_mpz_t());
    mpz_divexact(out.y.get_mpz_t(), num.y.get_mpz_t(), n.get_mpz_t());
    return out;
  }
};

struct ModP {
  uint64_t p;
  uint64_t mu;  // floor(2^64 / p)

  explicit ModP(uint32_t prime) : p(prime), mu(~uint64_t{0} / prime) {}

  uint64_t reduce(uint64_t x) const {
    uint64_t q = static_cast<uint64_t>((static_cast<unsigned __int128>(x) * mu) >> 64);
    uint64_t r = x - q * p;
    while (r >= p) r -= p;
    return r;
  }

  uint64_t inv(uint64_t a) const {
    uint64_t r = 1, base = a, e = p - 2;
    while (e) {
      if (e & 1) r = reduce(r * base);
      base = reduce(base * base);
      e >>= 1;
    }
    return r;
  }
};

// In-place Gauss-Jordan modulo p; returns the pivot columns.
std::vector<Index> rref_mod(std::vector<uint32_t>& a, Index m, Index n, const ModP& f) {
  std::vector<Index> pivots;
  Index r = 0;
  for (Index c = 0; c < n && r < m; ++c) {
    Index piv = -1;
    for (Index i = r; i < m; ++i)
      if (a[static_cast<size_t>(i * n + c)] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    uint32_t* prow = &a[static_cast<size_t>(r * n)];
    if (piv != r) std::swap_ranges(prow, prow + n, &a[static_cast<size_t>(piv * n)]);
    const uint64_t inv = f.inv(prow[c]);
    for (Index j = c; j < n; ++j)
      if (prow[j]) prow[j] = static_cast<uint32_t>(f.reduce(prow[j] * inv));
    for (Index i = 0; i < m; ++i) {
      if (i == r) continue;
      uint32_t* row = &a[static_cast<size_t>(i * n)];
      const uint64_t g = row[c];
      if (g == 0) continue;
      const uint64_t neg = f.p - g;
      for (Index j = c; j < n; ++j)
        if (prow[j]) row[j] = static_cast<uint32_t>(f.reduce(row[j] + neg * prow[j]));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

// Earlier pivots and higher rank are better; reduction mod p can only lose rank
// or push pivots to the right.
bool better_profile(const std::vector<Index>& a, const std::vector<Index>& b) {
  if (a.size() != b.size()) return a.size() > b.size();
  return a < b;
}

bool ratrecon(const Integer& a, const Integer& m, const Integer& bound, Rational& out) {
  Integer r0 = m, r1 = a, t0 = 0, t1 = 1, q, tmp;
  while (cmp(r1, bound) > 0) {
    mpz_fdiv_q(q.get_mpz_t(), r0.get_mpz_t(), r1.get_mpz_t());
    tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (sgn(t1) == 0 || cmp(abs(t1), bound) > 0) return false;
  Integer g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
  if (g != 1) return false;
  out = Rational(r1, t1);
  out.canonicalize();
  return true;
}

}  // namespace

Rref<Scalar> rref_bareiss(const ExactMat& mat) {
  const Index m = mat.rows(), n = mat.cols();
  long b = 0;
  for (Index k = 0; k < mat.size(); ++k)
    if (!mat.data()[k].is_rational()) b = mat.data()[k].radicand();
  const ZRing ring{b};

  std::vector<ZR> a(static_cast<size_t>(m * n));
  {
    detail::RowScaled r0 = detail::scale_rows(mat, detail::Part::rational);
    detail::RowScaled r1 = detail::scale_rows(mat, detail::Part::root);
    for (Index i = 0; i < m; ++i) {
      Integer l;
      mpz_lcm(l.get_mpz_t(), r0.den[static_cast<size_t>(i)].get_mpz_t(), r1.den[static_cast<size_t>(i)].get_mpz_t());
      const Integer s0 = l / r0.den[static_cast<size_t>(i)], s1 = l / r1.den[static_cast<size_t>(i)];
      for (Index j = 0; j < n; ++j) {
        ZR& e = a[static_cast<size_t>(i * n + j)];
        e.x = r0.num(i, j) * s0;
        e.y = r1.num(i, j) * s1;
      }
    }
  }

  // Fraction-free Gauss-Jordan: every pivot row ends up scaled by the last pivot.
  std::vector<Index> pivots;
  ZR prev{1, 0};
  Index r = 0;
  for (Index c = 0; c < n && r < m; ++c) {
    Index piv = -1;
    for (Index i = r; i < m; ++i)
      if (!a[static_cast<size_t>(i * n + c)].zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (Index j = 0; j < n; ++j) std::swap(a[static_cast<size_t>(r * n + j)], a[static_cast<size_t>(piv * n + j)]);
    const ZR p = a[static_cast<size_t>(r * n + c)];
    for (Index i = 0; i < m; ++i) {
      if (i == r) continue;
      const ZR f = a[static_cast<size_t>(i * n + c)];
      // rows above the pivot may carry entries in earlier free columns
      for (Index j = i < r ? 0 : c + 1; j < n; ++j) {
        if (j == c) continue;
        ring.combine(a[static_cast<size_t>(i * n + j)], p, f, a[static_cast<size_t>(r * n + j)], prev);
      }
      a[static_cast<size_t>(i * n + c)] = ZR{};
    }
    prev = p;
    pivots.push_back(c);
    ++r;
  }

  Rref<Scalar> out;
  out.pivots = pivots;
  out.R = ExactMat::Zero(r, n);
  if (r == 0) return out;
  // Divide through by the common pivot value d.
  const Scalar dinv = Scalar(Rational(prev.x), Rational(prev.y), sgn(prev.y) ? b : 0).inverse();
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < n; ++j) {
      const ZR& e = a[static_cast<size_t>(i * n + j)];
      if (j == pivots[static_cast<size_t>(i)]) {
        out.R(i, j) = Scalar(1);
      } else if (!e.zero()) {
        out.R(i, j) = Scalar(Rational(e.x), Rational(e.y), sgn(e.y) ? b : 0) * dinv;
      }
    }
  }
  return out;
}

bool rref_multimodular(const ExactMat& mat, Rref<Scalar>& out) {
  if (!all_rational(mat)) return false;
  const Index m = mat.rows(), n = mat.cols();
  detail::IntMatrix mint = detail::scale_rows(mat, detail::Part::rational).num;

  std::vector<Index> best;
  std::vector<Integer> crt;  // residues of the rank x n reduced form
  Integer modulus = 1;
  constexpr size_t max_primes = 48;

  for (size_t t = 0; t < max_primes; ++t) {
    const uint32_t p = detail::word_prime(t);
    const ModP f(p);
    std::vector<uint32_t> a(static_cast<size_t>(m * n));
    for (size_t e = 0; e < a.size(); ++e) {
      const Integer& v = mint.data[e];
      a[e] = v.fits_slong_p() ? static_cast<uint32_t>(((v.get_si() % static_cast<long>(p)) + static_cast<long>(p)) % static_cast<long>(p))
                              : static_cast<uint32_t>(mpz_fdiv_ui(v.get_mpz_t(), p));
    }
    std::vector<Index> piv = rref_mod(a, m, n, f);
    const Index r = static_cast<Index>(piv.size());
    if (t == 0 || better_profile(piv, best)) {
      best = piv;
      modulus = p;
      crt.assign(static_cast<size_t>(r * n), Integer(0));
      for (size_t e = 0; e < crt.size(); ++e) crt[e] = a[e];
    } else if (piv != best) {
      continue;
    } else {
      // x += M * ((a - x) * M^-1 mod p)
      const uint64_t minv = f.inv(mpz_fdiv_ui(modulus.get_mpz_t(), p));
      for (size_t e = 0; e < crt.size(); ++e) {
        const uint64_t xr = mpz_fdiv_ui(crt[e].get_mpz_t(), p);
        const uint64_t diff = (a[e] + p - xr) % p;
        const uint64_t k = f.reduce(diff * minv);
        if (k) crt[e] += modulus * static_cast<unsigned long>(k);
      }
      modulus *= p;
    }

    // Reconstruct, one running denominator per row.
    Integer bound;
    mpz_sqrt(bound.get_mpz_t(), Integer(modulus / 2).get_mpz_t());
    ExactMat cand = ExactMat::Zero(r, n);
    bool ok = true;
    for (Index i = 0; i < r && ok; ++i) {
      Integer den = 1;
      for (Index j = 0; j < n && ok; ++j) {
        const Integer& v = crt[static_cast<size_t>(i * n + j)];
        if (sgn(v) == 0) continue;
        Integer x = v * den;
        mpz_mod(x.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t());
        if (x > modulus / 2) x -= modulus;
        if (cmp(abs(x), bound) <= 0 && cmp(den, bound) <= 0) {
          Rational q(x, den);
          q.canonicalize();
          cand(i, j) = Scalar(q);
          continue;
        }
        Rational q;
        if (!ratrecon(v, modulus, bound, q)) {
          ok = false;
          break;
        }
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
        cand(i, j) = Scalar(q);
      }
    }
    if (!ok) continue;

    // Certify: e * Mint == Mint[:, P] * diag(e / L) * Rint.
    detail::RowScaled rs = detail::scale_rows(cand, detail::Part::rational);
    Integer e = 1;
    for (const Integer& l : rs.den) mpz_lcm(e.get_mpz_t(), e.get_mpz_t(), l.get_mpz_t());
    detail::IntMatrix left(m, r);
    for (Index i = 0; i < m; ++i)
      for (Index k = 0; k < r; ++k) {
        const Integer& v = mint(i, best[static_cast<size_t>(k)]);
        if (sgn(v) != 0) left(i, k) = v * (e / rs.den[static_cast<size_t>(k)]);
      }
    detail::IntMatrix prod = detail::int_matmul(left, rs.num);
    bool certified = true;
    for (size_t k = 0; k < prod.data.size() && certified; ++k) {
      if (prod.data[k] != mint.data[k] * e) certified = false;
    }
    if (!certified) continue;
    out.R = std::move(cand);
    out.pivots = best;
    return true;
  }
  return false;
}

Rref<Complex> rref_float(const FloatMat& mat, double tol) {
  FloatMat a = mat;
  const Index m = a.rows(), n = a.cols();
  const double thresh = tol * std::max(1.0, max_abs(mat));
  Rref<Complex> out;
  Index r = 0;
  for (Index c = 0; c < n && r < m; ++c) {
    Index piv = -1;
    double best = thresh;
    for (Index i = r; i < m; ++i) {
      double v = std::abs(a(i, c));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (piv < 0) {
      for (Index i = r; i < m; ++i) a(i, c) = 0.0;
      continue;
    }
    a.row(r).swap(a.row(piv));
    a.row(r) /= a(r, c);
    for (Index i = 0; i < m; ++i) {
      if (i == r || a(i, c) == Complex(0.0)) continue;
      a.row(i) -= a(i, c) * a.row(r);
      a(i, c) = 0.0;
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.R = a.topRows(r);
  return out;
}

Rref<Scalar> Backend<Scalar>::rref(const ExactMat& m) const {
  EliminationRoute route = route_;
  if (route == EliminationRoute::automatic) {
    route = (m.rows() * m.cols() >= 400 && all_rational(m)) ? EliminationRoute::multimodular
                                                             : EliminationRoute::bareiss;
  }
  if (route == EliminationRoute::multimodular) {
    Rref<Scalar> out;
    if (rref_multimodular(m, out)) return out;
  }
  return rref_bareiss(m);
}

Rref<Complex> Backend<Complex>::rref(const FloatMat& m) const { return rref_float(m, tol_); }

}  // namespace splitdec

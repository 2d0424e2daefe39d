#pragma once

// Reference computations used by the tests.  Deliberately naive: textbook
// Gauss-Jordan on field elements, brute-force counts, direct formulas.

#include <random>
#include <vector>

#include "splitdec/matrix.hpp"

namespace oracle {

using namespace splitdec;

inline Rational small_rational(std::mt19937_64& rng, int span = 9) {
  std::uniform_int_distribution<int> num(-span, span), den(1, span);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

inline Scalar random_scalar(std::mt19937_64& rng, const GroundField& f, int span = 9) {
  Rational a0 = small_rational(rng, span);
  Rational a1 = f.mode() == FieldMode::quadratic ? small_rational(rng, span) : Rational(0);
  return f.make(a0, a1);
}

inline ExactMat random_matrix(std::mt19937_64& rng, const GroundField& f, Index r, Index c, int span = 9) {
  ExactMat m(r, c);
  for (Index k = 0; k < m.size(); ++k) m.data()[k] = random_scalar(rng, f, span);
  return m;
}

/// Random matrix of rank at most k: product of r x k and k x c factors.
inline ExactMat random_low_rank(std::mt19937_64& rng, const GroundField& f, Index r, Index c, Index k) {
  ExactMat a = random_matrix(rng, f, r, k, 4), b = random_matrix(rng, f, k, c, 4);
  ExactMat out = ExactMat::Zero(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j)
      for (Index l = 0; l < k; ++l) out(i, j) += a(i, l) * b(l, j);
  return out;
}

inline ExactMat naive_matmul(const ExactMat& a, const ExactMat& b) {
  ExactMat out = ExactMat::Zero(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < b.cols(); ++j)
      for (Index l = 0; l < a.cols(); ++l) out(i, j) += a(i, l) * b(l, j);
  return out;
}

/// Textbook Gauss-Jordan with scalar division; returns the nonzero rows.
inline ExactMat naive_rref(ExactMat a, std::vector<Index>* pivots = nullptr) {
  Index r = 0;
  std::vector<Index> piv;
  for (Index c = 0; c < a.cols() && r < a.rows(); ++c) {
    Index p = -1;
    for (Index i = r; i < a.rows(); ++i)
      if (!a(i, c).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) continue;
    a.row(r).swap(a.row(p));
    Scalar inv = a(r, c).inverse();
    for (Index j = 0; j < a.cols(); ++j) a(r, j) *= inv;
    for (Index i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c).is_zero()) continue;
      Scalar f = a(i, c);
      for (Index j = 0; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    piv.push_back(c);
    ++r;
  }
  if (pivots) *pivots = piv;
  return a.topRows(r);
}

inline Index naive_rank(const ExactMat& a) { return naive_rref(a).rows(); }

}  // namespace oracle

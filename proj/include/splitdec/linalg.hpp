#pragma once

// Row reduction, rank, kernel, inverse and solve over both backends.
//
// Exact reduction is fraction-free (Bareiss over Z[r]) followed by a division
// pass to the reduced echelon form.  Large rational matrices take a
// multimodular route whose result is reconstructed and then certified exactly
// against the input, so both routes return the same canonical form.

#include <string>
#include <vector>

#include "splitdec/matrix.hpp"

namespace splitdec {

enum class EliminationRoute { automatic, bareiss, multimodular };

/// Reduced row echelon form: R has rank() rows, pivot entries 1 and zeros
/// above and below every pivot.  Pivots are chosen as the first nonzero entry
/// in column order, so the result is unique.
template <typename S>
struct Rref {
  Mat<S> R;
  std::vector<Index> pivots;
  Index rank() const { return static_cast<Index>(pivots.size()); }
};

template <typename S>
class Backend;

template <>
class Backend<Scalar> {
 public:
  static constexpr bool exact = true;

  explicit Backend(GroundField field = GroundField(), EliminationRoute route = EliminationRoute::automatic)
      : field_(field), route_(route) {}

  const GroundField& field() const { return field_; }
  double tol() const { return 0.0; }
  std::string name() const { return "exact"; }

  Scalar lift(const Scalar& s) const { return s; }
  bool is_zero(const Scalar& s) const { return s.is_zero(); }
  double magnitude(const Scalar& s) const { return abs(s); }

  Rref<Scalar> rref(const ExactMat& m) const;
  ExactMat matmul(const ExactMat& a, const ExactMat& b) const { return splitdec::matmul(a, b); }

 private:
  GroundField field_;
  EliminationRoute route_;
};

template <>
class Backend<Complex> {
 public:
  static constexpr bool exact = false;

  explicit Backend(GroundField field = GroundField(), double tol = 1e-8) : field_(field), tol_(tol) {}

  const GroundField& field() const { return field_; }
  double tol() const { return tol_; }
  std::string name() const { return "f64"; }

  Complex lift(const Scalar& s) const { return field_.to_complex(s); }
  bool is_zero(const Complex& z) const { return std::abs(z) <= tol_; }
  double magnitude(const Complex& z) const { return std::abs(z); }

  Rref<Complex> rref(const FloatMat& m) const;
  FloatMat matmul(const FloatMat& a, const FloatMat& b) const { return splitdec::matmul(a, b); }

 private:
  GroundField field_;
  double tol_;
};

using ExactBackend = Backend<Scalar>;
using FloatBackend = Backend<Complex>;

Rref<Scalar> rref_bareiss(const ExactMat& m);
/// Multimodular reduction with exact certification.  Rational input only;
/// returns false if it gives up (the caller then falls back to Bareiss).
bool rref_multimodular(const ExactMat& m, Rref<Scalar>& out);
Rref<Complex> rref_float(const FloatMat& m, double tol);

template <typename S>
Mat<S> lift(const ExactMat& m, const Backend<S>& be) {
  Mat<S> out(m.rows(), m.cols());
  for (Index k = 0; k < m.size(); ++k) out.data()[k] = be.lift(m.data()[k]);
  return out;
}

template <typename S>
Index rank(const Mat<S>& m, const Backend<S>& be) {
  return be.rref(m).rank();
}

/// Kernel basis (columns), one vector per free column: 1 on that column,
/// minus the reduced entries on the pivot columns.
template <typename S>
Mat<S> kernel(const Mat<S>& m, const Backend<S>& be) {
  Rref<S> r = be.rref(m);
  const Index n = m.cols();
  std::vector<char> is_pivot(static_cast<size_t>(n), 0);
  for (Index p : r.pivots) is_pivot[static_cast<size_t>(p)] = 1;
  Mat<S> k = Mat<S>::Zero(n, n - r.rank());
  Index col = 0;
  for (Index f = 0; f < n; ++f) {
    if (is_pivot[static_cast<size_t>(f)]) continue;
    k(f, col) = S(1);
    for (Index row = 0; row < r.rank(); ++row) k(r.pivots[static_cast<size_t>(row)], col) = -r.R(row, f);
    ++col;
  }
  return k;
}

/// Canonical basis of the column space: the transpose of the reduced row
/// echelon form of m^t.
template <typename S>
Mat<S> column_space(const Mat<S>& m, const Backend<S>& be) {
  if (m.cols() == 0) return Mat<S>(m.rows(), 0);
  Rref<S> r = be.rref(Mat<S>(m.transpose()));
  return r.R.transpose();
}

/// Solves a x = rhs for square nonsingular a.
template <typename S>
Mat<S> solve(const Mat<S>& a, const Mat<S>& rhs, const Backend<S>& be) {
  if (a.rows() != a.cols() || rhs.rows() != a.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "solve: shape mismatch");
  }
  const Index n = a.rows();
  Mat<S> aug(n, n + rhs.cols());
  aug << a, rhs;
  Rref<S> r = be.rref(aug);
  if (r.rank() < n || (n > 0 && r.pivots[static_cast<size_t>(n - 1)] != n - 1)) {
    throw Error(ErrorKind::SingularMatrix, "solve: matrix of order " + std::to_string(n) + " is singular");
  }
  return r.R.rightCols(rhs.cols());
}

template <typename S>
Mat<S> inverse(const Mat<S>& a, const Backend<S>& be) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::ShapeMismatch, "inverse of a non-square matrix");
  return solve(a, identity<S>(a.rows()), be);
}

/// Max-abs entrywise difference; zero means exactly equal in the exact backend.
template <typename S>
double residual(const Mat<S>& a, const Mat<S>& b) {
  require_same_shape(a, b, "residual");
  double worst = 0.0;
  for (Index k = 0; k < a.size(); ++k) {
    using std::abs;
    if constexpr (std::is_same_v<S, Scalar>) {
      if (a.data()[k] == b.data()[k]) continue;
      worst = std::max(worst, std::max(splitdec::abs(a.data()[k] - b.data()[k]), 1e-300));
    } else {
      worst = std::max(worst, std::abs(a.data()[k] - b.data()[k]));
    }
  }
  return worst;
}

template <typename S>
bool approx_equal(const Mat<S>& a, const Mat<S>& b, const Backend<S>& be) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if constexpr (Backend<S>::exact) {
    return a == b;
  } else {
    return residual(a, b) <= be.tol() * std::max(1.0, std::max(max_abs(a), max_abs(b)));
  }
}

}  // namespace splitdec

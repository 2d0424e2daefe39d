#pragma once

// Dense matrices over the exact scalar (Q(r)) and over complex<double>, the
// Eigen glue needed for a GMP-backed scalar, and the free functions every
// other module builds on.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "splitdec/field.hpp"

namespace Eigen {

template <>
struct NumTraits<splitdec::Scalar> : GenericNumTraits<splitdec::Scalar> {
  using Real = splitdec::Scalar;
  using NonInteger = splitdec::Scalar;
  using Literal = splitdec::Scalar;
  using Nested = splitdec::Scalar;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 64,
    MulCost = 256
  };
  static Real epsilon() { return Real(0); }
  static Real dummy_precision() { return Real(0); }
  static int digits10() { return 0; }
};

}  // namespace Eigen

namespace splitdec {

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using ExactMat = Mat<Scalar>;
using FloatMat = Mat<Complex>;

inline Complex conj(const Complex& z) { return std::conj(z); }

template <typename S>
Mat<S> identity(Index n) {
  return Mat<S>::Identity(n, n);
}

template <typename S>
Mat<S> all_ones(Index rows, Index cols) {
  return Mat<S>::Constant(rows, cols, S(1));
}

template <typename S>
void require_same_shape(const Mat<S>& a, const Mat<S>& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::ShapeMismatch,
                std::string(op) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

template <typename S>
Mat<S> add(const Mat<S>& a, const Mat<S>& b) {
  require_same_shape(a, b, "add");
  return a + b;
}

template <typename S>
Mat<S> sub(const Mat<S>& a, const Mat<S>& b) {
  require_same_shape(a, b, "sub");
  return a - b;
}

template <typename S>
Mat<S> scale(const Mat<S>& a, const S& s) {
  Mat<S> out = a;
  for (Index k = 0; k < out.size(); ++k) out.data()[k] *= s;
  return out;
}

/// Entrywise (Hadamard) product.
template <typename S>
Mat<S> hadamard(const Mat<S>& a, const Mat<S>& b) {
  require_same_shape(a, b, "hadamard");
  return a.cwiseProduct(b);
}

template <typename S>
Mat<S> conj(const Mat<S>& a) {
  Mat<S> out(a.rows(), a.cols());
  for (Index k = 0; k < a.size(); ++k) out.data()[k] = conj(a.data()[k]);
  return out;
}

template <typename S>
Mat<S> conj_transpose(const Mat<S>& a) {
  Mat<S> out(a.cols(), a.rows());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out(j, i) = conj(a(i, j));
  return out;
}

template <typename S>
S trace(const Mat<S>& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::ShapeMismatch, "trace of a non-square matrix");
  S t(0);
  for (Index i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

/// Exact product.  Rational parts go through scaled-integer kernels.
ExactMat matmul(const ExactMat& a, const ExactMat& b);
FloatMat matmul(const FloatMat& a, const FloatMat& b);

bool all_rational(const ExactMat& m);
bool is_zero(const ExactMat& m);

double max_abs(const ExactMat& m);
double max_abs(const FloatMat& m);

FloatMat to_float(const ExactMat& m, const GroundField& field);

/// Matrix dump: header `rows cols b mode qsign`, then one row per line.
std::string dump_matrix(const ExactMat& m, const GroundField& field);
ExactMat parse_matrix(const std::string& text, GroundField* field_out = nullptr);

}  // namespace splitdec

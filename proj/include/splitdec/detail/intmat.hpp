#pragma once

// Scaled-integer views of rational matrices and the integer kernels behind
// exact products and multimodular reduction.  Internal to the library.

#include <cstdint>
#include <vector>

#include "splitdec/matrix.hpp"

namespace splitdec::detail {

struct IntMatrix {
  Index rows = 0;
  Index cols = 0;
  std::vector<Integer> data;  // row-major

  IntMatrix() = default;
  IntMatrix(Index r, Index c) : rows(r), cols(c), data(static_cast<size_t>(r * c)) {}

  Integer& operator()(Index i, Index j) { return data[static_cast<size_t>(i * cols + j)]; }
  const Integer& operator()(Index i, Index j) const { return data[static_cast<size_t>(i * cols + j)]; }

  size_t max_bits() const;
};

/// Which coordinate of a0 + a1*r to extract.
enum class Part { rational, root };

/// m_part = diag(1/den) * num, den[i] the lcm of row i's denominators.
struct RowScaled {
  IntMatrix num;
  std::vector<Integer> den;
};

/// m_part = num * diag(1/den), den[j] the lcm of column j's denominators.
struct ColScaled {
  IntMatrix num;
  std::vector<Integer> den;
};

RowScaled scale_rows(const ExactMat& m, Part part);
ColScaled scale_cols(const ExactMat& m, Part part);

/// Exact integer product.  Native 128-bit accumulation when the entry bound
/// allows it, otherwise residues modulo word-size primes and CRT.
IntMatrix int_matmul(const IntMatrix& a, const IntMatrix& b);

/// Rational product of the chosen parts of a and b.
std::vector<Rational> rational_matmul(const ExactMat& a, Part pa, const ExactMat& b, Part pb);

/// Primes just below 2^31, in decreasing order, generated on demand.
uint32_t word_prime(size_t index);

}  // namespace splitdec::detail

#pragma once

// Subspaces of S^n held in reduced column echelon form, so equal subspaces
// have identical bases.

#include <vector>

#include "splitdec/linalg.hpp"

namespace splitdec {

template <typename S>
class Subspace {
 public:
  explicit Subspace(Index ambient = 0) : basis_(ambient, 0) {}

  /// Column span of m.
  static Subspace span(const Mat<S>& m, const Backend<S>& be) {
    Subspace out(m.rows());
    if (m.cols() == 0) return out;
    Rref<S> r = be.rref(Mat<S>(m.transpose()));
    out.basis_ = r.R.transpose();
    out.pivots_ = r.pivots;
    return out;
  }

  /// Wraps a basis that is already in reduced column echelon form.
  static Subspace from_echelon(Mat<S> basis, std::vector<Index> pivots) {
    Subspace out(basis.rows());
    out.basis_ = std::move(basis);
    out.pivots_ = std::move(pivots);
    return out;
  }

  static Subspace full(Index n) {
    Subspace out(n);
    out.basis_ = identity<S>(n);
    for (Index i = 0; i < n; ++i) out.pivots_.push_back(i);
    return out;
  }

  /// span{e_i : i in rows}, rows increasing.
  static Subspace coordinate(Index n, const std::vector<Index>& rows) {
    Subspace out(n);
    out.basis_ = Mat<S>::Zero(n, static_cast<Index>(rows.size()));
    for (size_t k = 0; k < rows.size(); ++k) out.basis_(rows[k], static_cast<Index>(k)) = S(1);
    out.pivots_ = rows;
    return out;
  }

  Index ambient() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  const Mat<S>& basis() const { return basis_; }
  /// Row index of the leading 1 in each basis column.
  const std::vector<Index>& pivots() const { return pivots_; }

  /// Coordinates of v in the echelon basis, assuming v lies in the subspace.
  Mat<S> coords(const Mat<S>& v) const {
    Mat<S> c(dim(), v.cols());
    for (Index k = 0; k < dim(); ++k) c.row(k) = v.row(pivots_[static_cast<size_t>(k)]);
    return c;
  }

  bool contains(const Mat<S>& v, const Backend<S>& be) const {
    if (v.rows() != ambient()) throw Error(ErrorKind::AmbientMismatch, "contains: ambient dimension differs");
    Mat<S> back = dim() == 0 ? Mat<S>(Mat<S>::Zero(v.rows(), v.cols())) : be.matmul(basis_, coords(v));
    return approx_equal(back, v, be);
  }

  bool contains(const Subspace& w, const Backend<S>& be) const { return contains(w.basis(), be); }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient() == b.ambient() && a.pivots_ == b.pivots_ && a.basis_ == b.basis_;
  }

 private:
  Mat<S> basis_;
  std::vector<Index> pivots_;
};

template <typename S>
void require_same_ambient(const Subspace<S>& u, const Subspace<S>& w, const char* op) {
  if (u.ambient() != w.ambient()) {
    throw Error(ErrorKind::AmbientMismatch, std::string(op) + ": ambient " + std::to_string(u.ambient()) + " vs " +
                                                std::to_string(w.ambient()));
  }
}

template <typename S>
Subspace<S> sum(const Subspace<S>& u, const Subspace<S>& w, const Backend<S>& be) {
  require_same_ambient(u, w, "sum");
  if (u.dim() == 0) return w;
  if (w.dim() == 0) return u;
  Mat<S> both(u.ambient(), u.dim() + w.dim());
  both << u.basis(), w.basis();
  return Subspace<S>::span(both, be);
}

/// Intersection through the kernel of [U | -W].
template <typename S>
Subspace<S> intersect(const Subspace<S>& u, const Subspace<S>& w, const Backend<S>& be) {
  require_same_ambient(u, w, "intersect");
  if (u.dim() == 0 || w.dim() == 0) return Subspace<S>(u.ambient());
  Mat<S> block(u.ambient(), u.dim() + w.dim());
  block << u.basis(), -w.basis();
  Mat<S> k = kernel(block, be);
  return Subspace<S>::span(be.matmul(u.basis(), Mat<S>(k.topRows(u.dim()))), be);
}

/// {w in W : <w, u> = 0 for all u in U}, with <u, v> = u^t conj(v).
template <typename S>
Subspace<S> orth_complement_within(const Subspace<S>& u, const Subspace<S>& w, const Backend<S>& be) {
  require_same_ambient(u, w, "orth_complement_within");
  if (u.dim() == 0 || w.dim() == 0) return w;
  Mat<S> gram = be.matmul(conj_transpose(u.basis()), w.basis());
  Mat<S> k = kernel(gram, be);
  if (k.cols() == 0) return Subspace<S>(w.ambient());
  return Subspace<S>::span(be.matmul(w.basis(), k), be);
}

/// Columns of the concatenated cell bases, in order.
template <typename S>
Mat<S> concat_bases(const std::vector<Subspace<S>>& cells) {
  if (cells.empty()) return Mat<S>(0, 0);
  Index n = cells.front().ambient(), total = 0;
  for (const auto& c : cells) {
    require_same_ambient(cells.front(), c, "concat_bases");
    total += c.dim();
  }
  Mat<S> out(n, total);
  Index col = 0;
  for (const auto& c : cells) {
    out.middleCols(col, c.dim()) = c.basis();
    col += c.dim();
  }
  return out;
}

/// Projection onto cells[index] along the other cells.
template <typename S>
Mat<S> projector_from_direct_sum(const std::vector<Subspace<S>>& cells, size_t index, const Backend<S>& be) {
  if (index >= cells.size()) throw Error(ErrorKind::IndexOutOfRange, "projector_from_direct_sum: no such cell");
  Mat<S> c = concat_bases(cells);
  if (c.rows() != c.cols()) {
    throw Error(ErrorKind::NotADirectSum, "cells span " + std::to_string(c.cols()) + " columns in dimension " +
                                              std::to_string(c.rows()));
  }
  Mat<S> cinv;
  try {
    cinv = inverse(c, be);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularMatrix) throw;
    throw Error(ErrorKind::NotADirectSum, "concatenated cell bases are singular");
  }
  Index offset = 0;
  for (size_t k = 0; k < index; ++k) offset += cells[k].dim();
  const Index d = cells[index].dim();
  if (d == 0) return Mat<S>::Zero(c.rows(), c.rows());
  return be.matmul(Mat<S>(c.middleCols(offset, d)), Mat<S>(cinv.middleRows(offset, d)));
}

}  // namespace splitdec

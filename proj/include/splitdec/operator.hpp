#pragma once

// Matrices kept as products of cheap factors and applied to blocks of
// vectors, so identities among long products never form the dense product.

#include <memory>
#include <string>
#include <vector>

#include "splitdec/split.hpp"

namespace splitdec {

template <typename S>
class Factor {
 public:
  enum class Kind { dense, diagonal, spectral, adjacency };

  static Factor dense(Mat<S> m) {
    Factor f(Kind::dense);
    f.dense_ = std::make_shared<const Mat<S>>(std::move(m));
    return f;
  }
  static Factor diagonal(Vec<S> d) {
    Factor f(Kind::diagonal);
    f.w_ = std::move(d);
    return f;
  }
  /// C diag(w) Cinv over the grid's concatenated cell bases.
  static Factor spectral(std::shared_ptr<const SplitGrid<S>> grid, Vec<S> w) {
    Factor f(Kind::spectral);
    f.grid_ = std::move(grid);
    f.w_ = std::move(w);
    return f;
  }
  /// c1 A_1 + c0 I through adjacency lists.
  static Factor adjacency(std::shared_ptr<const std::vector<std::vector<int>>> adj, S c1, S c0) {
    Factor f(Kind::adjacency);
    f.adj_ = std::move(adj);
    f.c1_ = c1;
    f.c0_ = c0;
    return f;
  }

  Kind kind() const { return kind_; }
  const Vec<S>& weights() const { return w_; }

  Factor transpose() const {
    Factor f = *this;
    if (kind_ == Kind::dense) f.dense_ = std::make_shared<const Mat<S>>(dense_->transpose());
    if (kind_ == Kind::spectral) f.transposed_ = !transposed_;
    return f;
  }

  Mat<S> apply(const Mat<S>& v, const Backend<S>& be) const {
    switch (kind_) {
      case Kind::dense:
        return be.matmul(*dense_, v);
      case Kind::diagonal: {
        Mat<S> out = v;
        for (Index c = 0; c < out.cols(); ++c)
          for (Index r = 0; r < out.rows(); ++r) out(r, c) *= w_(r);
        return out;
      }
      case Kind::adjacency: {
        const auto& adj = *adj_;
        Mat<S> out(v.rows(), v.cols());
        for (Index r = 0; r < v.rows(); ++r) {
          for (Index c = 0; c < v.cols(); ++c) {
            S acc(0);
            for (int z : adj[static_cast<size_t>(r)]) acc += v(z, c);
            out(r, c) = c1_ * acc + c0_ * v(r, c);
          }
        }
        return out;
      }
      case Kind::spectral: {
        const Mat<S>& C = grid_->C();
        const Mat<S>& Cinv = grid_->Cinv();
        Mat<S> t = transposed_ ? Mat<S>(be.matmul(Mat<S>(v.transpose()), C).transpose()) : be.matmul(Cinv, v);
        for (Index c = 0; c < t.cols(); ++c)
          for (Index r = 0; r < t.rows(); ++r) t(r, c) *= w_(r);
        return transposed_ ? Mat<S>(be.matmul(Mat<S>(t.transpose()), Cinv).transpose()) : be.matmul(C, t);
      }
    }
    return v;
  }

 private:
  explicit Factor(Kind k) : kind_(k) {}

  Kind kind_;
  std::shared_ptr<const Mat<S>> dense_;
  Vec<S> w_;
  std::shared_ptr<const SplitGrid<S>> grid_;
  bool transposed_ = false;
  std::shared_ptr<const std::vector<std::vector<int>>> adj_;
  S c1_{}, c0_{};
};

/// Product F_1 F_2 ... F_k; apply() works right to left.
template <typename S>
class Operator {
 public:
  Operator() = default;
  Operator(std::string name, std::vector<Factor<S>> factors) : name_(std::move(name)), factors_(std::move(factors)) {}

  const std::string& name() const { return name_; }
  const std::vector<Factor<S>>& factors() const { return factors_; }

  Mat<S> apply(const Mat<S>& v, const Backend<S>& be) const {
    Mat<S> out = v;
    for (size_t k = factors_.size(); k-- > 0;) out = factors_[k].apply(out, be);
    return out;
  }

  Operator transpose() const {
    std::vector<Factor<S>> out;
    for (size_t k = factors_.size(); k-- > 0;) out.push_back(factors_[k].transpose());
    return Operator(name_ + "^t", std::move(out));
  }

  /// A * B as a longer chain.
  friend Operator operator*(const Operator& a, const Operator& b) {
    std::vector<Factor<S>> f = a.factors_;
    f.insert(f.end(), b.factors_.begin(), b.factors_.end());
    return Operator(a.name_ + b.name_, std::move(f));
  }

  /// Collapses the chain into one dense factor.
  Operator densified(Index n, const Backend<S>& be) const {
    return Operator(name_, {Factor<S>::dense(apply(identity<S>(n), be))});
  }

 private:
  std::string name_;
  std::vector<Factor<S>> factors_;
};

}  // namespace splitdec

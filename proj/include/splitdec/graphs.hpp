#pragma once

// Graph families, breadth-first distance data and intersection numbers.

#include <cstdint>
#include <string>
#include <vector>

#include "splitdec/matrix.hpp"

namespace splitdec {

/// GF(p^k) for the small orders the forms graphs need, as full tables.
/// Element codes are 0..order-1, read as base-p coefficient vectors of a
/// polynomial in t (least significant digit = constant term).
class FiniteField {
 public:
  explicit FiniteField(int order);

  int order() const { return order_; }
  int characteristic() const { return p_; }
  int degree() const { return k_; }

  int add(int x, int y) const { return add_[static_cast<size_t>(x * order_ + y)]; }
  int mul(int x, int y) const { return mul_[static_cast<size_t>(x * order_ + y)]; }
  int neg(int x) const { return neg_[static_cast<size_t>(x)]; }
  int sub(int x, int y) const { return add(x, neg(y)); }
  int inv(int x) const;
  /// x -> x^p.
  int frobenius(int x) const { return frob_[static_cast<size_t>(x)]; }

  /// Rank of a rows x cols matrix (row-major codes).
  int rank(std::vector<int> m, int rows, int cols) const;

 private:
  int order_, p_, k_;
  std::vector<int> add_, mul_, neg_, inv_, frob_;
};

struct Graph {
  int n = 0;
  std::vector<std::vector<int>> adj;  // sorted neighbour lists
  std::vector<std::string> labels;    // optional
  std::string name;

  bool adjacent(int u, int v) const;
  /// 0/1 adjacency matrix.
  ExactMat adjacency() const;
};

/// Checks symmetry, loops, multi-edges and connectivity; throws accordingly.
void validate(const Graph& g);

Graph hamming(int D, int q);
Graph johnson(int n, int d);
Graph cycle(int n);
/// d x e matrices over GF(r), adjacent iff the difference has rank 1.
Graph bilinear_forms(int d, int e, int r);
/// d x d Hermitian matrices over GF(r^2), adjacent iff the difference has rank 1.
Graph hermitian_forms(int d, int r);

/// `hamming:D,q`, `johnson:n,d`, `cycle:n`, `bilinear:d,e,r`,
/// `hermitian:d,r`, `file:path`.
Graph build_family(const std::string& descriptor);

/// Edge-list file: first line n, then `u v` per edge, `#` comments.
Graph graph_from_file(const std::string& path);
Graph graph_from_text(const std::string& text);

struct DistanceData {
  int n = 0;
  int D = 0;
  std::vector<uint8_t> dist;  // n*n, row-major

  int operator()(int x, int y) const { return dist[static_cast<size_t>(x) * static_cast<size_t>(n) + static_cast<size_t>(y)]; }
  /// Distance-i matrix A_i.
  ExactMat A(int i) const;
  /// Vertices at distance i from x.
  std::vector<int> sphere(int x, int i) const;
  std::vector<int> sphere_sizes(int x) const;
};

DistanceData distance_data(const Graph& g);

struct IntersectionData {
  int D = 0;
  std::vector<long> p;  // p^h_{ij} at (h*(D+1) + i)*(D+1) + j
  std::vector<long> c, a, b;

  long operator()(int h, int i, int j) const {
    return p[static_cast<size_t>((h * (D + 1) + i) * (D + 1) + j)];
  }
  long valency() const { return b[0]; }
  /// k_i = p^0_{ii}.
  long sphere_size(int i) const { return (*this)(0, i, i); }
  /// `{b0,b1,...;c1,c2,...}`.
  std::string array_string() const;
};

/// Intersection numbers, verified over every vertex pair.
IntersectionData intersection_numbers(const Graph& g, const DistanceData& dd);

}  // namespace splitdec

#pragma once

// Bose-Mesner data of a distance-regular graph (eigenvalues, primitive
// idempotents, Krein parameters, Q-polynomial orderings) and the dual
// Bose-Mesner data at a base vertex.

#include <optional>
#include <vector>

#include "splitdec/graphs.hpp"
#include "splitdec/report.hpp"

namespace splitdec {

/// Coefficients (x_0, ..., x_D) of sum_h x_h A_h.
using BMCoef = std::vector<Scalar>;

/// Arithmetic in the Bose-Mesner algebra carried out on distance-basis
/// coefficients, with A_a A_b = sum_h p^h_{ab} A_h.
class BoseMesner {
 public:
  BoseMesner(const IntersectionData& in, int n) : in_(in), n_(n) {}

  int D() const { return in_.D; }
  int n() const { return n_; }

  BMCoef zero() const { return BMCoef(static_cast<size_t>(D() + 1), Scalar(0)); }
  BMCoef A(int h) const;
  BMCoef identity() const { return A(0); }
  BMCoef mul(const BMCoef& x, const BMCoef& y) const;
  BMCoef mul_A1(const BMCoef& x) const;
  BMCoef hadamard(const BMCoef& x, const BMCoef& y) const;
  /// trace(X) = n x_0.
  Scalar trace(const BMCoef& x) const { return x[0] * Scalar(static_cast<long>(n_)); }
  ExactMat dense(const BMCoef& x, const DistanceData& dd) const;

 private:
  const IntersectionData& in_;
  int n_;
};

BMCoef add(const BMCoef& x, const BMCoef& y);
BMCoef scale(const BMCoef& x, const Scalar& s);

struct SchemeData {
  int n = 0;
  int D = 0;
  GroundField field;
  std::vector<Scalar> theta;
  std::vector<BMCoef> coef;  // E_i in the distance basis
  std::vector<long> m;
  std::vector<Scalar> krein;  // q^h_{ij} at (h*(D+1) + i)*(D+1) + j
  /// ordering[i] = position of E_i in the descending eigenvalue list.
  std::vector<int> ordering;

  const Scalar& q(int h, int i, int j) const {
    return krein[static_cast<size_t>((h * (D + 1) + i) * (D + 1) + j)];
  }
  ExactMat E(int i, const DistanceData& dd) const;
  /// sum of E_i over the listed indices, as one dense matrix.
  ExactMat E_sum(const std::vector<int>& idx, const DistanceData& dd) const;
};

/// Characteristic polynomial of the tridiagonal intersection matrix, constant
/// term first.
std::vector<Integer> char_poly(const IntersectionData& in);

/// Smallest field holding every eigenvalue: b = 1 when all are rational,
/// otherwise the common squarefree discriminant of the quadratic factors.
GroundField natural_field(const IntersectionData& in, int qsign = 1);

/// The D+1 eigenvalues in decreasing order, exactly in the given field.
std::vector<Scalar> eigenvalues_A1(const IntersectionData& in, const GroundField& field);

/// E_i = prod_{j != i} (A_1 - theta_j I) / (theta_i - theta_j).
std::vector<BMCoef> primitive_idempotents(const BoseMesner& bm, const std::vector<Scalar>& theta);

/// Eigenvalues, idempotents, multiplicities and Krein parameters in the
/// decreasing eigenvalue order, every defining property verified.  Checks go
/// to log when given; the first failure is also thrown.
SchemeData build_scheme(const IntersectionData& in, const DistanceData& dd, const GroundField& field,
                        CheckLog* log = nullptr);

std::vector<Scalar> krein_parameters(const BoseMesner& bm, const std::vector<BMCoef>& E, const std::vector<long>& m);

/// Every ordering (starting at E_0) satisfying the triangle condition.
std::vector<std::vector<int>> find_qpoly_orderings(const SchemeData& s);

struct SelfDualResult {
  bool pass = false;
  std::string witness;
};

/// q^h_{ij} = p^h_{ij} for all h, i, j under the ordering.
SelfDualResult check_self_dual(const SchemeData& s, const std::vector<int>& ordering, const IntersectionData& in);

/// Relabels the idempotents so that new E_i = old E_{ordering[i]}.
SchemeData reorder(const SchemeData& s, const std::vector<int>& ordering);

struct OrderingChoice {
  std::vector<int> ordering;
  bool self_dual = false;
  int candidates = 0;
  int self_dual_candidates = 0;
};

/// First self-dual Q-polynomial ordering, else the first Q-polynomial one.
/// A requested ordering is validated instead.  Throws PropertyViolation when
/// there is no Q-polynomial ordering (or the requested one fails).
OrderingChoice select_ordering(const SchemeData& s, const IntersectionData& in,
                               const std::optional<std::vector<int>>& requested = std::nullopt);

struct DualData {
  int x = 0;
  int n = 0;
  int D = 0;
  std::vector<int> shell;               // shell[y] = distance from x
  std::vector<std::vector<Scalar>> astar;  // diagonals of A*_i
  std::vector<Scalar> thetastar;

  ExactMat Estar(int i) const;
  ExactMat Astar(int i) const;
  /// Vertices with shell in [lo, hi], increasing.
  std::vector<Index> rows(int lo, int hi) const;
};

/// Dual data at x.  The vectors E_i x-hat are recomputed from A_1 directly
/// (not from the distance-basis coefficients) and both are compared.
DualData dual_data(const SchemeData& s, const Graph& g, const DistanceData& dd, int x, CheckLog* log = nullptr);

}  // namespace splitdec

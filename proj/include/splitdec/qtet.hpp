#pragma once

// Classical parameters with alpha = b - 1, the matrices A, A*, B, B*, K, K*,
// Phi, Psi, the q-tetrahedron generators acting on the standard module, and
// the transpose / conjugate / relation suites.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "splitdec/operator.hpp"

namespace splitdec {

struct ClassicalParams {
  int D = 0;
  long b = 0;
  long alpha = 0;  // b - 1
  Rational beta;
  GroundField field;  // q^2 = b
  Scalar alpha0, alpha1;
  /// One line per candidate root of b^2 + b - c_2, with its verdict.
  std::vector<std::string> candidates;

  /// "b>1" or "b<-1".
  std::string branch() const { return b > 1 ? "b>1" : "b<-1"; }
};

/// Closed-form c_i and b_i for classical parameters (D, b, b-1, beta).
Rational classical_c(long b, int i);
Rational classical_b(long b, const Rational& beta, int D, int i);

/// Solves b from c_2 = b(b+1), requires every c_i, b_i to match the closed
/// forms and b not in {0, -1, 1}.  The returned field has q^2 = b with the
/// given sign choice; alpha0, alpha1 are filled in by fit_alpha.
ClassicalParams detect_classical(const IntersectionData& in, int qsign = 1);

/// alpha0, alpha1 with theta_i = theta*_i = alpha0 + alpha1 q^{D-2i}, from a
/// scheme already in its self-dual ordering.  Throws AlphaFitFailure.
void fit_alpha(ClassicalParams& p, const SchemeData& s, const DualData& dual, CheckLog* log = nullptr);

/// Generator labels in the order x01, x12, x23, x30, x02, x20, x13, x31.
extern const std::array<const char*, 8> kGeneratorLabels;

template <typename S>
struct QTetSystem {
  ClassicalParams params;
  Index n = 0;
  std::shared_ptr<const SplitGrid<S>> dd, ud, du, uu;
  // the eight matrices and the inverses the generators need
  std::map<std::string, Operator<S>> mats;
  std::map<std::string, Operator<S>> gens;

  const Operator<S>& M(const std::string& name) const;
  const Operator<S>& x(const std::string& label) const;
  S q(long k) const;
};

/// Builds every matrix as a factor chain.  A* comes from the dual data, A
/// from A_1; the remaining six are weighted sums over the split grids.  The
/// spectral identities for A and A* are checked (SpectralMismatch).
template <typename S>
QTetSystem<S> build_qtet(const ClassicalParams& p, const SchemeData& s, const DualData& dual, const Graph& g,
                         const SplitSystem<S>& split, const Backend<S>& be, CheckLog* log = nullptr);

/// Same system with every matrix collapsed to one dense factor.
template <typename S>
QTetSystem<S> densified(const QTetSystem<S>& sys, const Backend<S>& be);

/// Rational test vectors: the identity (count = 0) or `count` seeded random
/// columns with small numerators and denominators.
struct Probe {
  bool full = false;
  int count = 32;
  std::uint64_t seed = 42;
  std::string label() const;
};

template <typename S>
Mat<S> probe_block(Index n, const Probe& probe, const Backend<S>& be);

/// Check names are qtet.<sweep>.<identity>; sweep is "full" or "probe".
template <typename S>
void check_tables(const QTetSystem<S>& sys, const Backend<S>& be, CheckLog& log);

template <typename S>
void check_transpose_suite(const QTetSystem<S>& sys, const Mat<S>& v, const std::string& sweep, const Backend<S>& be,
                           CheckLog& log);

template <typename S>
void check_conjugate_suite(const QTetSystem<S>& sys, const QTetSystem<S>& prime, const Mat<S>& v,
                           const std::string& sweep, const Backend<S>& be, CheckLog& log);

template <typename S>
void check_boxtimes_relations(const QTetSystem<S>& sys, const Mat<S>& v, const std::string& sweep,
                              const Backend<S>& be, CheckLog& log);

template <typename S>
void check_generator_symmetries(const QTetSystem<S>& sys, const QTetSystem<S>& prime, const Mat<S>& v,
                                const std::string& sweep, const Backend<S>& be, CheckLog& log);

}  // namespace splitdec

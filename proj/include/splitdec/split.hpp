#pragma once

// The four (mu,nu)-split decompositions of the standard module at a base
// vertex: prefix subspaces V_{i,j}, tilde cells, projectors E_{i,j} and the
// displacement projectors phi_eta, psi_zeta.

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "splitdec/report.hpp"
#include "splitdec/scheme.hpp"
#include "splitdec/subspace.hpp"

namespace splitdec {

enum class Dir { down, up };

struct SplitKind {
  Dir mu;
  Dir nu;
  friend bool operator==(SplitKind a, SplitKind b) { return a.mu == b.mu && a.nu == b.nu; }
};

inline constexpr SplitKind kDownDown{Dir::down, Dir::down};
inline constexpr SplitKind kUpDown{Dir::up, Dir::down};
inline constexpr SplitKind kDownUp{Dir::down, Dir::up};
inline constexpr SplitKind kUpUp{Dir::up, Dir::up};
inline constexpr std::array<SplitKind, 4> kAllSplits{kDownDown, kUpDown, kDownUp, kUpUp};

/// "dd", "ud", "du", "uu" (mu first).
std::string split_name(SplitKind k);

/// Vertices y with d(x,y) <= i (mu = down) or d(x,y) >= D - i (mu = up).
std::vector<Index> star_prefix_rows(const DualData& dual, Dir mu, int i);
/// Idempotent indices 0..j (nu = down) or D-j..D (nu = up).
std::vector<int> prefix_indices(int D, Dir nu, int j);

template <typename S>
class SplitGrid {
 public:
  SplitGrid() = default;
  SplitGrid(SplitKind kind, const SchemeData& s, const DualData& dual, const DistanceData& dd, const Backend<S>& be);

  /// Entrywise conversion of an exact grid (bases, C and Cinv), so float
  /// checks measure rounding only.
  static SplitGrid from_exact(const SplitGrid<Scalar>& g, const Backend<S>& be);

  /// Rebuilds a grid from stored cell dimensions (row-major), C and Cinv.
  static SplitGrid from_cells(SplitKind kind, const SchemeData& s, const DualData& dual, const DistanceData& dd,
                              const std::vector<Index>& dims, Mat<S> C, Mat<S> Cinv, const Backend<S>& be);

  SplitKind kind() const { return kind_; }
  int D() const { return D_; }
  Index n() const { return n_; }

  /// V_{i,j} for -1 <= i,j <= D (zero when i or j is -1).  Kept only for
  /// small graphs; otherwise recomputed on each call.
  Subspace<S> prefix(int i, int j) const;
  /// All V_{i,j}, 0 <= i,j <= D, row-major.
  std::vector<Subspace<S>> prefixes() const;
  const Subspace<S>& cell(int i, int j) const { return tilde_[at(i, j)]; }
  Index dim(int i, int j) const { return cell(i, j).dim(); }
  /// Column offset of cell (i,j) inside C.
  Index offset(int i, int j) const { return offset_[at(i, j)]; }

  const Mat<S>& C() const { return C_; }
  const Mat<S>& Cinv() const { return Cinv_; }

  /// E_{i,j} = C[:, cell] Cinv[cell, :], formed on demand.
  Mat<S> projector(int i, int j) const;
  /// sum over cells of w(i,j) E_{i,j}, i.e. C diag(w) Cinv.
  Mat<S> weighted(const std::function<S(int, int)>& w) const;
  /// Per-column weights of C for w.
  Vec<S> column_weights(const std::function<S(int, int)>& w) const;
  /// Sum of E_{i,j} over cells with i + j = s.
  Mat<S> antidiagonal(int s) const;

 private:
  template <typename T>
  friend class SplitGrid;

  size_t at(int i, int j) const;
  Mat<S> complement_rows(int j) const;
  Subspace<S> prefix_from(const Mat<S>& complement, int i) const;

  SplitKind kind_{};
  int D_ = 0;
  Index n_ = 0;
  std::vector<Subspace<S>> prefix_;  // (D+1)^2, row-major
  std::vector<Subspace<S>> tilde_;
  std::vector<Index> offset_;
  Mat<S> C_, Cinv_;
  Backend<S> be_;
  std::shared_ptr<const SchemeData> scheme_;
  std::shared_ptr<const DistanceData> dd_;
  std::vector<std::vector<Index>> star_rows_;
};

template <typename S>
class SplitSystem {
 public:
  SplitSystem(const SchemeData& s, const DualData& dual, const DistanceData& dd, const Backend<S>& be);

  static SplitSystem from_exact(const SplitSystem<Scalar>& sys, const Backend<S>& be);
  /// Grids in the order of kAllSplits.
  static SplitSystem from_grids(std::array<SplitGrid<S>, 4> grids);

  const SplitGrid<S>& grid(SplitKind k) const { return *grid_ptr(k); }
  std::shared_ptr<const SplitGrid<S>> grid_ptr(SplitKind k) const;
  int D() const { return D_; }
  Index n() const { return n_; }

  /// phi_eta from the down-down grid (i+j = D+eta) and from up-up (i+j = D-eta).
  Mat<S> phi(int eta) const { return grid(kDownDown).antidiagonal(D_ + eta); }
  Mat<S> phi_alt(int eta) const { return grid(kUpUp).antidiagonal(D_ - eta); }
  /// psi_zeta from down-up (i+j = D+zeta) and from up-down (i+j = D-zeta).
  Mat<S> psi(int zeta) const { return grid(kDownUp).antidiagonal(D_ + zeta); }
  Mat<S> psi_alt(int zeta) const { return grid(kUpDown).antidiagonal(D_ - zeta); }

  /// Tilde-cell dimension grid of one split, row-major.
  std::vector<std::vector<Index>> dims(SplitKind k) const;

 private:
  SplitSystem() = default;
  template <typename T>
  friend class SplitSystem;

  int D_ = 0;
  Index n_ = 0;
  std::array<std::shared_ptr<const SplitGrid<S>>, 4> grids_;
};

template <typename S>
struct Displacement {
  std::vector<Mat<S>> phi;  // phi_0..phi_D
  std::vector<Mat<S>> psi;  // psi_{-D}..psi_D
};

/// phi_eta and psi_zeta, each compared against its second expression;
/// throws CrossExpressionMismatch if the two disagree.
template <typename S>
Displacement<S> displacement_projectors(const SplitSystem<S>& sys, const Backend<S>& be);

/// Every split-decomposition identity, recorded as named checks.
template <typename S>
void verify_split_suite(const SplitSystem<S>& sys, const SchemeData& s, const DualData& dual, const DistanceData& dd,
                        const Backend<S>& be, CheckLog& log);

/// Cell components of v: component (i,j) is E_{i,j} v, obtained from one
/// solve against C rather than from the projectors.
template <typename S>
std::vector<Mat<S>> components_by_solve(const SplitGrid<S>& g, const Mat<S>& v, const Backend<S>& be);

}  // namespace splitdec

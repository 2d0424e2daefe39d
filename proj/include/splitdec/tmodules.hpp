#pragma once

// Irreducible T-modules of the standard module on small graphs, their
// endpoints, diameters and displacements, and the module-level checks
// against the split and displacement decompositions.

#include <cstdint>
#include <vector>

#include "splitdec/split.hpp"

namespace splitdec {

inline constexpr Index kModuleLimit = 64;

struct TModule {
  Subspace<Scalar> basis;
  int rho = 0;     // endpoint
  int tau = 0;     // dual endpoint
  int d = 0;       // diameter
  int dual_d = 0;  // dual diameter
  int eta = 0;     // rho + tau + d - D
  int zeta = 0;    // rho - tau
  std::vector<Index> star_dims;  // dim E*_i W
  std::vector<Index> dims;       // dim E_i W
  Index dim() const { return basis.dim(); }
};

struct Decomposition {
  std::vector<TModule> modules;
  int draws = 0;  // random central elements used
  Index commutant_dim = 0;
  Index center_dim = 0;
};

/// Context shared by the module routines: dense A_1, the E_i, shell lists.
class ModuleContext {
 public:
  ModuleContext(const SchemeData& s, const DualData& dual, const Graph& g, const DistanceData& dd);

  int D() const { return D_; }
  Index n() const { return n_; }
  const ExactMat& A1() const { return A1_; }
  const ExactMat& E(int i) const { return E_[static_cast<size_t>(i)]; }
  const std::vector<Index>& shell(int i) const { return shells_[static_cast<size_t>(i)]; }
  const Vec<Scalar>& astar1() const { return astar1_; }

  /// Smallest subspace containing v and closed under A_1 and A*_1.
  Subspace<Scalar> closure(const ExactMat& v) const;
  /// E*_i W and E_i W as subspaces.
  Subspace<Scalar> star_part(const Subspace<Scalar>& w, int i) const;
  Subspace<Scalar> eigen_part(const Subspace<Scalar>& w, int i) const;
  bool invariant(const Subspace<Scalar>& w) const;

 private:
  int D_;
  Index n_;
  ExactMat A1_;
  std::vector<ExactMat> E_;
  std::vector<std::vector<Index>> shells_;
  Vec<Scalar> astar1_;
  ExactBackend be_;
};

/// Fills rho, tau, d, eta, zeta from the E*_i / E_i supports.  Throws
/// NonContiguousSupport when either support has a gap or the diameter and
/// dual diameter differ.
void module_stats(TModule& w, const ModuleContext& ctx);

/// Orthogonal decomposition into irreducible T-modules, sorted by
/// (rho, tau, d, dim).  Central elements of the commutant drawn from a fixed
/// seed schedule separate the isotypic components; each component is split
/// by closures of vectors in its lowest E*_i-part.  Throws NotFullySplit
/// after `budget` draws and SuiteInapplicable above kModuleLimit vertices.
Decomposition decompose(const ModuleContext& ctx, std::uint64_t seed = 1, int budget = 8);

/// Orthogonality, dimension sum, invariance and irreducibility certificates
/// plus the per-module bounds.
void check_decomposition(const Decomposition& dec, const ModuleContext& ctx, CheckLog& log);

/// The W^{mu nu}_h cells of one module: direct sums, the predicted tilde
/// cells, and the action of the displacement projectors.
void check_module_cells(const TModule& w, int index, const ModuleContext& ctx, const SplitSystem<Scalar>& split,
                        const Displacement<Scalar>& disp, CheckLog& log);

/// W^{mu nu}_h for h = 0..d.
std::vector<Subspace<Scalar>> module_cells(const TModule& w, SplitKind k, const ModuleContext& ctx);

/// rank phi_eta and rank psi_zeta against module dimension sums.
void displacement_cross_check(const Decomposition& dec, const Displacement<Scalar>& disp, int D, CheckLog& log);

}  // namespace splitdec

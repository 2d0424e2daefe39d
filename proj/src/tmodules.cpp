#include "splitdec/tmodules.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <tuple>

#include <Eigen/Eigenvalues>

namespace splitdec {

namespace {

std::string stats_label(const TModule& w) {
  return "(rho,tau,d) = (" + std::to_string(w.rho) + "," + std::to_string(w.tau) + "," + std::to_string(w.d) + ")";
}

// Block-diagonal matrices, one k_a x k_a block per shell.
using Blocks = std::vector<ExactMat>;

Blocks block_mul(const Blocks& x, const Blocks& y, const ExactBackend& be) {
  Blocks out(x.size());
  for (size_t a = 0; a < x.size(); ++a) out[a] = be.matmul(x[a], y[a]);
  return out;
}

Blocks block_combo(const std::vector<Blocks>& basis, const std::vector<Scalar>& c) {
  Blocks out(basis.front().size());
  for (size_t a = 0; a < out.size(); ++a) out[a] = ExactMat::Zero(basis.front()[a].rows(), basis.front()[a].cols());
  for (size_t k = 0; k < basis.size(); ++k) {
    if (c[k].is_zero()) continue;
    for (size_t a = 0; a < out.size(); ++a) out[a] += scale(basis[k][a], c[k]);
  }
  return out;
}

ExactMat block_vec(const Blocks& x) {
  Index total = 0;
  for (const auto& b : x) total += b.size();
  ExactMat out(total, 1);
  Index r = 0;
  for (const auto& b : x)
    for (Index i = 0; i < b.rows(); ++i)
      for (Index j = 0; j < b.cols(); ++j) out(r++, 0) = b(i, j);
  return out;
}

Blocks to_integer(Blocks x) {
  Integer l(1);
  for (const auto& b : x)
    for (Index k = 0; k < b.size(); ++k) l = lcm(l, b.data()[k].rational_part().get_den());
  for (auto& b : x) b = scale(b, Scalar(Rational(l)));
  return x;
}

}  // namespace

ModuleContext::ModuleContext(const SchemeData& s, const DualData& dual, const Graph& g, const DistanceData& dd)
    : D_(s.D), n_(s.n), be_(s.field) {
  if (n_ > kModuleLimit) {
    throw Error(ErrorKind::SuiteInapplicable, "module decomposition is limited to " + std::to_string(kModuleLimit) +
                                                  " vertices, graph has " + std::to_string(n_));
  }
  A1_ = g.adjacency();
  for (int i = 0; i <= D_; ++i) E_.push_back(s.E(i, dd));
  shells_.resize(static_cast<size_t>(D_ + 1));
  for (Index y = 0; y < n_; ++y) shells_[static_cast<size_t>(dual.shell[static_cast<size_t>(y)])].push_back(y);
  astar1_ = Vec<Scalar>(n_);
  for (Index y = 0; y < n_; ++y) astar1_(y) = dual.astar[1][static_cast<size_t>(y)];
}

Subspace<Scalar> ModuleContext::closure(const ExactMat& v) const {
  Subspace<Scalar> w = Subspace<Scalar>::span(v, be_);
  for (;;) {
    const ExactMat& b = w.basis();
    ExactMat all(n_, 3 * b.cols());
    all << b, be_.matmul(A1_, b), astar1_.asDiagonal() * b;
    Subspace<Scalar> next = Subspace<Scalar>::span(all, be_);
    if (next.dim() == w.dim()) return w;
    w = std::move(next);
  }
}

Subspace<Scalar> ModuleContext::star_part(const Subspace<Scalar>& w, int i) const {
  ExactMat m = ExactMat::Zero(n_, w.dim());
  for (Index y : shell(i)) m.row(y) = w.basis().row(y);
  return Subspace<Scalar>::span(m, be_);
}

Subspace<Scalar> ModuleContext::eigen_part(const Subspace<Scalar>& w, int i) const {
  return Subspace<Scalar>::span(be_.matmul(E(i), w.basis()), be_);
}

bool ModuleContext::invariant(const Subspace<Scalar>& w) const {
  return w.contains(be_.matmul(A1_, w.basis()), be_) && w.contains(ExactMat(astar1_.asDiagonal() * w.basis()), be_);
}

void module_stats(TModule& w, const ModuleContext& ctx) {
  const int D = ctx.D();
  w.star_dims.assign(static_cast<size_t>(D + 1), 0);
  w.dims.assign(static_cast<size_t>(D + 1), 0);
  for (int i = 0; i <= D; ++i) {
    w.star_dims[static_cast<size_t>(i)] = ctx.star_part(w.basis, i).dim();
    w.dims[static_cast<size_t>(i)] = ctx.eigen_part(w.basis, i).dim();
  }
  auto support = [&](const std::vector<Index>& dims, const char* what) {
    int lo = -1, hi = -1;
    for (int i = 0; i <= D; ++i)
      if (dims[static_cast<size_t>(i)] != 0) {
        if (lo < 0) lo = i;
        hi = i;
      }
    for (int i = lo; i <= hi; ++i)
      if (lo < 0 || dims[static_cast<size_t>(i)] == 0) {
        throw Error(ErrorKind::NonContiguousSupport,
                    std::string(what) + " support has a gap at " + std::to_string(i) + " in a module of dimension " +
                        std::to_string(w.dim()));
      }
    if (lo < 0) throw Error(ErrorKind::NonContiguousSupport, "zero module");
    return std::pair{lo, hi};
  };
  auto [r0, r1] = support(w.star_dims, "E*");
  auto [t0, t1] = support(w.dims, "E");
  w.rho = r0;
  w.d = r1 - r0;
  w.tau = t0;
  w.dual_d = t1 - t0;
  w.eta = w.rho + w.tau + w.d - D;
  w.zeta = w.rho - w.tau;
}

Decomposition decompose(const ModuleContext& ctx, std::uint64_t seed, int budget) {
  const ExactBackend be;
  const int D = ctx.D();
  const Index n = ctx.n();
  const ExactMat& A = ctx.A1();
  std::vector<Index> pos(static_cast<size_t>(n)), off(static_cast<size_t>(D + 2), 0);
  std::vector<int> shell_of(static_cast<size_t>(n));
  for (int a = 0; a <= D; ++a) {
    const auto& sh = ctx.shell(a);
    for (size_t p = 0; p < sh.size(); ++p) {
      pos[static_cast<size_t>(sh[p])] = static_cast<Index>(p);
      shell_of[static_cast<size_t>(sh[p])] = a;
    }
    const Index k = static_cast<Index>(sh.size());
    off[static_cast<size_t>(a + 1)] = off[static_cast<size_t>(a)] + k * k;
  }
  const Index unknowns = off.back();
  auto unk = [&](int a, Index r, Index c) {
    return off[static_cast<size_t>(a)] + r * static_cast<Index>(ctx.shell(a).size()) + c;
  };

  // commutant: block-diagonal M (it commutes with A*_1) with A_1 M = M A_1
  std::vector<std::vector<Scalar>> rows;
  for (int a = 0; a <= D; ++a)
    for (int b = std::max(0, a - 1); b <= std::min(D, a + 1); ++b)
      for (Index y : ctx.shell(a))
        for (Index z : ctx.shell(b)) {
          std::vector<Scalar> row(static_cast<size_t>(unknowns), Scalar(0));
          for (Index w : ctx.shell(b))
            if (!A(y, w).is_zero()) row[static_cast<size_t>(unk(b, pos[static_cast<size_t>(w)], pos[static_cast<size_t>(z)]))] += 1;
          for (Index w : ctx.shell(a))
            if (!A(w, z).is_zero()) row[static_cast<size_t>(unk(a, pos[static_cast<size_t>(y)], pos[static_cast<size_t>(w)]))] -= 1;
          rows.push_back(std::move(row));
        }
  ExactMat eq(static_cast<Index>(rows.size()), unknowns);
  for (size_t r = 0; r < rows.size(); ++r)
    for (Index c = 0; c < unknowns; ++c) eq(static_cast<Index>(r), c) = rows[r][static_cast<size_t>(c)];
  const ExactMat kern = kernel(eq, be);
  std::vector<Blocks> comm;
  for (Index c = 0; c < kern.cols(); ++c) {
    Blocks bl(static_cast<size_t>(D + 1));
    for (int a = 0; a <= D; ++a) {
      const Index k = static_cast<Index>(ctx.shell(a).size());
      bl[static_cast<size_t>(a)] = ExactMat(k, k);
      for (Index r = 0; r < k; ++r)
        for (Index s = 0; s < k; ++s) bl[static_cast<size_t>(a)](r, s) = kern(unk(a, r, s), c);
    }
    comm.push_back(std::move(bl));
  }

  // centre: combinations commuting with every commutant basis element
  ExactMat K = identity<Scalar>(static_cast<Index>(comm.size()));
  for (size_t l = 0; l < comm.size() && K.cols() > 1; ++l) {
    ExactMat step(unknowns, K.cols());
    for (Index c = 0; c < K.cols(); ++c) {
      std::vector<Scalar> coef(comm.size());
      for (size_t k = 0; k < comm.size(); ++k) coef[k] = K(static_cast<Index>(k), c);
      const Blocks z = block_combo(comm, coef);
      Blocks diff = block_mul(z, comm[l], be);
      const Blocks other = block_mul(comm[l], z, be);
      for (size_t a = 0; a < diff.size(); ++a) diff[a] -= other[a];
      step.col(c) = block_vec(diff);
    }
    K = be.matmul(K, kernel(step, be));
  }
  std::vector<Blocks> center;
  for (Index c = 0; c < K.cols(); ++c) {
    std::vector<Scalar> coef(comm.size());
    for (size_t k = 0; k < comm.size(); ++k) coef[k] = K(static_cast<Index>(k), c);
    center.push_back(to_integer(block_combo(comm, coef)));
  }

  Decomposition dec;
  dec.commutant_dim = static_cast<Index>(comm.size());
  dec.center_dim = static_cast<Index>(center.size());
  std::string last_failure;
  for (int draw = 0; draw < budget; ++draw) {
    dec.draws = draw + 1;
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(draw));
    std::uniform_int_distribution<int> pick(-3, 3);
    std::vector<Scalar> coef(center.size());
    for (auto& c : coef) c = Scalar(pick(rng));
    Blocks z = block_combo(center, coef);
    for (auto& b : z) b = ExactMat(b + ExactMat(b.transpose()));

    // integer eigenvalues, block by block
    std::map<long, std::vector<Subspace<Scalar>>> pieces;
    bool ok = true;
    for (int a = 0; a <= D && ok; ++a) {
      const ExactMat& zb = z[static_cast<size_t>(a)];
      Eigen::MatrixXd f(zb.rows(), zb.cols());
      for (Index k = 0; k < zb.size(); ++k) f.data()[k] = zb.data()[k].rational_part().get_d();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f, Eigen::EigenvaluesOnly);
      const double scale_ = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
      std::vector<long> lambdas;
      for (Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double l = es.eigenvalues()(k);
        if (std::abs(l - std::round(l)) > 1e-7 * scale_) {
          ok = false;
          last_failure = "central element with a non-integer eigenvalue";
          break;
        }
        const long li = std::lround(l);
        if (std::find(lambdas.begin(), lambdas.end(), li) == lambdas.end()) lambdas.push_back(li);
      }
      Index got = 0;
      for (long l : lambdas) {
        const ExactMat kz = kernel(ExactMat(zb - scale(identity<Scalar>(zb.rows()), Scalar(l))), be);
        ExactMat embed = ExactMat::Zero(n, kz.cols());
        for (Index r = 0; r < kz.rows(); ++r) embed.row(ctx.shell(a)[static_cast<size_t>(r)]) = kz.row(r);
        pieces[l].push_back(Subspace<Scalar>::span(embed, be));
        got += kz.cols();
      }
      if (ok && got != zb.rows()) {
        ok = false;
        last_failure = "eigenvalues of a central element do not account for shell " + std::to_string(a);
      }
    }
    if (!ok) continue;

    std::vector<TModule> found;
    for (auto& [l, parts] : pieces) {
      ExactMat all(n, 0);
      for (const auto& p : parts) {
        ExactMat next(n, all.cols() + p.dim());
        next << all, p.basis();
        all = std::move(next);
      }
      Subspace<Scalar> u = Subspace<Scalar>::span(all, be);
      if (!ctx.invariant(u)) {
        ok = false;
        last_failure = "eigenspace of a central element is not T-invariant";
        break;
      }
      while (u.dim() > 0 && ok) {
        int lo = 0;
        Subspace<Scalar> low = ctx.star_part(u, 0);
        while (low.dim() == 0) low = ctx.star_part(u, ++lo);
        TModule w;
        w.basis = ctx.closure(ExactMat(low.basis().col(0)));
        // dim E*_rho W = 1 with W generated by it certifies irreducibility
        if (ctx.star_part(w.basis, lo).dim() != 1) {
          ok = false;
          last_failure = "closure of a lowest vector has dim E*_" + std::to_string(lo) + "W = " +
                         std::to_string(ctx.star_part(w.basis, lo).dim());
          break;
        }
        module_stats(w, ctx);
        u = orth_complement_within(w.basis, u, be);
        found.push_back(std::move(w));
      }
      if (!ok) break;
    }
    if (!ok) continue;
    std::stable_sort(found.begin(), found.end(), [](const TModule& x, const TModule& y) {
      return std::make_tuple(x.rho, x.tau, x.d, x.dim(), x.basis.pivots()) <
             std::make_tuple(y.rho, y.tau, y.d, y.dim(), y.basis.pivots());
    });
    dec.modules = std::move(found);
    return dec;
  }
  throw Error(ErrorKind::NotFullySplit,
              std::to_string(budget) + " central elements tried, last failure: " + last_failure);
}

void check_decomposition(const Decomposition& dec, const ModuleContext& ctx, CheckLog& log) {
  const ExactBackend be;
  const int D = ctx.D();
  const auto& mods = dec.modules;
  std::string w_orth, w_inv, w_irr, w_diam, w_ub, w_lb, w_disp;
  Index total = 0;
  for (size_t a = 0; a < mods.size(); ++a) {
    const TModule& w = mods[a];
    const std::string tag = "module " + std::to_string(a) + " " + stats_label(w);
    total += w.dim();
    for (size_t b = a + 1; b < mods.size() && w_orth.empty(); ++b)
      if (!is_zero(be.matmul(conj_transpose(w.basis.basis()), mods[b].basis.basis())))
        w_orth = "modules " + std::to_string(a) + " and " + std::to_string(b);
    if (w_inv.empty() && !ctx.invariant(w.basis)) w_inv = tag;
    // closure of every basis vector of every nonzero E*_i W is W
    for (int i = 0; i <= D && w_irr.empty(); ++i) {
      const Subspace<Scalar> part = ctx.star_part(w.basis, i);
      for (Index c = 0; c < part.dim() && w_irr.empty(); ++c)
        if (ctx.closure(ExactMat(part.basis().col(c))).dim() != w.dim())
          w_irr = tag + ", vector " + std::to_string(c) + " of E*_" + std::to_string(i) + "W";
    }
    if (w_irr.empty() && w.star_dims[static_cast<size_t>(w.rho)] != 1)
      w_irr = tag + ", dim E*_rho W = " + std::to_string(w.star_dims[static_cast<size_t>(w.rho)]);
    if (w_diam.empty() && w.d != w.dual_d) w_diam = tag + ", dual diameter " + std::to_string(w.dual_d);
    if (w_ub.empty() && (w.rho + w.d > D || w.tau + w.d > D)) w_ub = tag;
    if (w_lb.empty() && (2 * w.rho + w.d < D || 2 * w.tau + w.d < D)) w_lb = tag;
    if (w_disp.empty() && (w.eta < 0 || w.eta > D || w.zeta < -D || w.zeta > D))
      w_disp = tag + ", eta = " + std::to_string(w.eta) + ", zeta = " + std::to_string(w.zeta);
  }
  log.record("tmodule.orthogonal", "V is an orthogonal direct sum of irreducible T-modules", w_orth.empty(), w_orth);
  log.record("tmodule.dim_sum", "sum of dim W = |X|", total == ctx.n(),
             "dimensions sum to " + std::to_string(total) + ", |X| = " + std::to_string(ctx.n()));
  log.record("tmodule.invariant", "A_1 W in W and A*_1 W in W", w_inv.empty(), w_inv);
  log.record("tmodule.irreducible", "T-closure of any vector of E*_i W is W", w_irr.empty(), w_irr);
  log.record("tmodule.diameter_equals_dual", "diameter of W = dual diameter of W", w_diam.empty(), w_diam);
  log.record("tmodule.bounds.upper", "rho + d <= D and tau + d <= D", w_ub.empty(), w_ub);
  log.record("tmodule.bounds.lower", "2 rho + d >= D and 2 tau + d >= D", w_lb.empty(), w_lb);
  log.record("tmodule.bounds.displacement", "0 <= eta <= D and -D <= zeta <= D", w_disp.empty(), w_disp);
}

std::vector<Subspace<Scalar>> module_cells(const TModule& w, SplitKind k, const ModuleContext& ctx) {
  const ExactBackend be;
  const Index n = ctx.n();
  auto span_parts = [&](bool star, int lo, int hi) {
    ExactMat all(n, 0);
    for (int i = lo; i <= hi; ++i) {
      const Subspace<Scalar> p = star ? ctx.star_part(w.basis, i) : ctx.eigen_part(w.basis, i);
      ExactMat next(n, all.cols() + p.dim());
      next << all, p.basis();
      all = std::move(next);
    }
    return Subspace<Scalar>::span(all, be);
  };
  std::vector<Subspace<Scalar>> out;
  for (int h = 0; h <= w.d; ++h) {
    const Subspace<Scalar> star = k.mu == Dir::down ? span_parts(true, w.rho, w.rho + h)
                                                    : span_parts(true, w.rho + w.d - h, w.rho + w.d);
    const Subspace<Scalar> eig = k.nu == Dir::down ? span_parts(false, w.tau, w.tau + w.d - h)
                                                   : span_parts(false, w.tau + h, w.tau + w.d);
    out.push_back(intersect(star, eig, be));
  }
  return out;
}

void check_module_cells(const TModule& w, int index, const ModuleContext& ctx, const SplitSystem<Scalar>& split,
                        const Displacement<Scalar>& disp, CheckLog& log) {
  const ExactBackend be;
  const int D = ctx.D();
  const std::string p = "tmodule.m" + std::to_string(index) + ".";
  const std::string tag = stats_label(w);
  for (SplitKind k : kAllSplits) {
    const std::string g = split_name(k);
    const std::vector<Subspace<Scalar>> cells = module_cells(w, k, ctx);
    Index total = 0;
    ExactMat all(ctx.n(), 0);
    for (const auto& c : cells) {
      total += c.dim();
      ExactMat next(ctx.n(), all.cols() + c.dim());
      next << all, c.basis();
      all = std::move(next);
    }
    const bool direct = total == w.dim() && rank(all, be) == w.dim();
    log.record(p + "cells." + g + ".direct_sum", "W = sum_h W^" + g + "_h (direct)", direct,
               tag + ": cell dimensions sum to " + std::to_string(total) + ", dim W = " + std::to_string(w.dim()));
    std::string bad;
    for (int h = 0; h <= w.d && bad.empty(); ++h) {
      const Subspace<Scalar>& c = cells[static_cast<size_t>(h)];
      const int pi = k.mu == Dir::down ? w.rho + h : D - w.rho - w.d + h;
      const int pj = k.nu == Dir::down ? w.tau + w.d - h : D - w.tau - h;
      if (c.dim() == 0) {
        bad = "W_" + std::to_string(h) + " = 0";
        continue;
      }
      const SplitGrid<Scalar>& grid = split.grid(k);
      for (int i = 0; i <= D && bad.empty(); ++i)
        for (int j = 0; j <= D && bad.empty(); ++j) {
          const bool in = grid.cell(i, j).contains(c, be);
          if (in != (i == pi && j == pj))
            bad = "W_" + std::to_string(h) + (in ? " lies in " : " does not lie in ") + "cell (" + std::to_string(i) +
                  "," + std::to_string(j) + ")";
        }
    }
    const std::string anchor = k == kDownDown ? "W^dd_h in Vtilde^dd_{i,j} iff i = rho+h, j = tau+d-h"
                               : k == kUpDown ? "W^ud_h in Vtilde^ud_{i,j} iff i = D-rho-d+h, j = tau+d-h"
                               : k == kDownUp ? "W^du_h in Vtilde^du_{i,j} iff i = rho+h, j = D-tau-h"
                                              : "W^uu_h in Vtilde^uu_{i,j} iff i = D-rho-d+h, j = D-tau-h";
    log.record(p + "cells." + g + ".containment", anchor, bad.empty(), tag + ": " + bad);
  }
  std::string phi_bad, psi_bad;
  for (int e = 0; e <= D && phi_bad.empty(); ++e) {
    const ExactMat img = be.matmul(disp.phi[static_cast<size_t>(e)], w.basis.basis());
    const bool ok = e == w.eta ? img == w.basis.basis() : is_zero(img);
    if (!ok) phi_bad = tag + ", eta = " + std::to_string(w.eta) + ", phi_" + std::to_string(e);
  }
  for (int z = -D; z <= D && psi_bad.empty(); ++z) {
    const ExactMat img = be.matmul(disp.psi[static_cast<size_t>(z + D)], w.basis.basis());
    const bool ok = z == w.zeta ? img == w.basis.basis() : is_zero(img);
    if (!ok) psi_bad = tag + ", zeta = " + std::to_string(w.zeta) + ", psi_" + std::to_string(z);
  }
  log.record(p + "phi_action", "phi_eta W = W and phi_xi W = 0 for xi != eta", phi_bad.empty(), phi_bad);
  log.record(p + "psi_action", "psi_zeta W = W and psi_xi W = 0 for xi != zeta", psi_bad.empty(), psi_bad);
}

void displacement_cross_check(const Decomposition& dec, const Displacement<Scalar>& disp, int D, CheckLog& log) {
  const ExactBackend be;
  std::string phi_bad, psi_bad;
  Index total = 0;
  for (int e = 0; e <= D; ++e) {
    Index want = 0;
    for (const auto& w : dec.modules)
      if (w.eta == e) want += w.dim();
    const Index got = rank(disp.phi[static_cast<size_t>(e)], be);
    total += got;
    if (phi_bad.empty() && got != want)
      phi_bad = "rank phi_" + std::to_string(e) + " = " + std::to_string(got) + ", modules give " + std::to_string(want);
  }
  for (int z = -D; z <= D; ++z) {
    Index want = 0;
    for (const auto& w : dec.modules)
      if (w.zeta == z) want += w.dim();
    const Index got = rank(disp.psi[static_cast<size_t>(z + D)], be);
    if (psi_bad.empty() && got != want)
      psi_bad = "rank psi_" + std::to_string(z) + " = " + std::to_string(got) + ", modules give " + std::to_string(want);
  }
  Index n = 0;
  for (const auto& w : dec.modules) n += w.dim();
  log.record("tmodule.displacement.phi_rank", "rank phi_eta = sum of dim W with displacement eta", phi_bad.empty(),
             phi_bad);
  log.record("tmodule.displacement.psi_rank", "rank psi_zeta = sum of dim W with displacement zeta", psi_bad.empty(),
             psi_bad);
  log.record("tmodule.displacement.phi_total", "sum_eta rank phi_eta = |X|", total == n,
             "ranks sum to " + std::to_string(total));
}

}  // namespace splitdec

#include "splitdec/split.hpp"

#include <algorithm>
#include <memory>

namespace splitdec {

namespace {

constexpr Index kDenseLimit = 64;

template <typename S>
Mat<S> gather_cols(const Mat<S>& m, const std::vector<Index>& cols) {
  Mat<S> out(m.rows(), static_cast<Index>(cols.size()));
  for (size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = m.col(cols[k]);
  return out;
}

template <typename S>
Mat<S> gather_rows(const Mat<S>& m, const std::vector<Index>& rows) {
  Mat<S> out(static_cast<Index>(rows.size()), m.cols());
  for (size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Index>(k)) = m.row(rows[k]);
  return out;
}

template <typename S>
bool same_subspace(const Subspace<S>& a, const Subspace<S>& b, const Backend<S>& be) {
  return a.dim() == b.dim() && a.contains(b, be) && b.contains(a, be);
}

std::string cell_label(int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

}  // namespace

std::string split_name(SplitKind k) {
  std::string out;
  out += k.mu == Dir::down ? 'd' : 'u';
  out += k.nu == Dir::down ? 'd' : 'u';
  return out;
}

std::vector<Index> star_prefix_rows(const DualData& dual, Dir mu, int i) {
  return mu == Dir::down ? dual.rows(0, i) : dual.rows(dual.D - i, dual.D);
}

std::vector<int> prefix_indices(int D, Dir nu, int j) {
  std::vector<int> out;
  for (int k = 0; k <= j; ++k) out.push_back(nu == Dir::down ? k : D - k);
  std::sort(out.begin(), out.end());
  return out;
}

template <typename S>
size_t SplitGrid<S>::at(int i, int j) const {
  if (i < 0 || j < 0 || i > D_ || j > D_) {
    throw Error(ErrorKind::IndexOutOfRange, "split cell " + cell_label(i, j) + " with D = " + std::to_string(D_));
  }
  return static_cast<size_t>(i * (D_ + 1) + j);
}

template <typename S>
SplitGrid<S>::SplitGrid(SplitKind kind, const SchemeData& s, const DualData& dual, const DistanceData& dd,
                        const Backend<S>& be)
    : kind_(kind), D_(s.D), n_(s.n), be_(be), scheme_(std::make_shared<const SchemeData>(s)),
      dd_(std::make_shared<const DistanceData>(dd)) {
  const int w = D_ + 1;
  for (int i = 0; i < w; ++i) star_rows_.push_back(star_prefix_rows(dual, kind.mu, i));
  std::vector<Subspace<S>> pre = prefixes();
  auto prefix_at = [&](int i, int j) {
    return i < 0 || j < 0 ? Subspace<S>(n_) : pre[static_cast<size_t>(i * w + j)];
  };
  Index total = 0;
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < w; ++j) {
      Subspace<S> lower = sum(prefix_at(i - 1, j), prefix_at(i, j - 1), be);
      tilde_.push_back(orth_complement_within(lower, prefix_at(i, j), be));
      offset_.push_back(total);
      total += tilde_.back().dim();
    }
  if (total != n_) {
    throw Error(ErrorKind::NotADirectSum, split_name(kind) + " tilde cells have total dimension " +
                                              std::to_string(total) + ", expected " + std::to_string(n_));
  }
  if (n_ <= kDenseLimit) prefix_ = std::move(pre);
  C_ = concat_bases(tilde_);
  try {
    Cinv_ = inverse(C_, be);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularMatrix) throw;
    throw Error(ErrorKind::NotADirectSum, split_name(kind) + " tilde cells are linearly dependent");
  }
}

template <typename S>
SplitGrid<S> SplitGrid<S>::from_exact(const SplitGrid<Scalar>& g, const Backend<S>& be) {
  SplitGrid out;
  out.kind_ = g.kind_;
  out.D_ = g.D_;
  out.n_ = g.n_;
  out.be_ = be;
  out.scheme_ = g.scheme_;
  out.dd_ = g.dd_;
  out.star_rows_ = g.star_rows_;
  out.offset_ = g.offset_;
  for (const auto& t : g.tilde_) out.tilde_.push_back(Subspace<S>::from_echelon(lift(t.basis(), be), t.pivots()));
  for (const auto& p : g.prefix_) out.prefix_.push_back(Subspace<S>::from_echelon(lift(p.basis(), be), p.pivots()));
  out.C_ = lift(g.C_, be);
  out.Cinv_ = lift(g.Cinv_, be);
  return out;
}

template <typename S>
SplitGrid<S> SplitGrid<S>::from_cells(SplitKind kind, const SchemeData& s, const DualData& dual,
                                      const DistanceData& dd, const std::vector<Index>& dims, Mat<S> C, Mat<S> Cinv,
                                      const Backend<S>& be) {
  const int w = s.D + 1;
  if (dims.size() != static_cast<size_t>(w * w) || C.rows() != s.n || C.cols() != s.n || Cinv.rows() != s.n ||
      Cinv.cols() != s.n) {
    throw Error(ErrorKind::ShapeMismatch, "stored " + split_name(kind) + " grid does not fit the scheme");
  }
  SplitGrid out;
  out.kind_ = kind;
  out.D_ = s.D;
  out.n_ = s.n;
  out.be_ = be;
  out.scheme_ = std::make_shared<const SchemeData>(s);
  out.dd_ = std::make_shared<const DistanceData>(dd);
  for (int i = 0; i < w; ++i) out.star_rows_.push_back(star_prefix_rows(dual, kind.mu, i));
  Index total = 0;
  for (Index d : dims) {
    Mat<S> basis = C.middleCols(total, d);
    std::vector<Index> pivots;
    for (Index c = 0; c < d; ++c) {
      Index r = 0;
      while (r < basis.rows() && be.is_zero(basis(r, c))) ++r;
      pivots.push_back(r);
    }
    out.offset_.push_back(total);
    out.tilde_.push_back(Subspace<S>::from_echelon(std::move(basis), std::move(pivots)));
    total += d;
  }
  if (total != out.n_) throw Error(ErrorKind::NotADirectSum, "stored cell dimensions do not sum to n");
  out.C_ = std::move(C);
  out.Cinv_ = std::move(Cinv);
  if (out.n_ <= kDenseLimit) out.prefix_ = out.prefixes();
  return out;
}

template <typename S>
Mat<S> SplitGrid<S>::complement_rows(int j) const {
  // Row basis of sum_{k not in prefix} E_k: its kernel is the E-prefix sum.
  std::vector<int> pre = prefix_indices(D_, kind_.nu, j), rest;
  for (int k = 0; k <= D_; ++k)
    if (std::find(pre.begin(), pre.end(), k) == pre.end()) rest.push_back(k);
  if (rest.empty()) return Mat<S>(0, n_);
  return be_.rref(lift(scheme_->E_sum(rest, *dd_), be_)).R;
}

template <typename S>
Subspace<S> SplitGrid<S>::prefix_from(const Mat<S>& r, int i) const {
  const std::vector<Index>& rows = star_rows_[static_cast<size_t>(i)];
  if (r.rows() == 0) return Subspace<S>::coordinate(n_, rows);
  Mat<S> k = kernel(gather_cols(r, rows), be_);
  Mat<S> embedded = Mat<S>::Zero(n_, k.cols());
  for (size_t t = 0; t < rows.size(); ++t) embedded.row(rows[t]) = k.row(static_cast<Index>(t));
  return Subspace<S>::span(embedded, be_);
}

template <typename S>
std::vector<Subspace<S>> SplitGrid<S>::prefixes() const {
  if (!prefix_.empty()) return prefix_;
  const int w = D_ + 1;
  std::vector<Subspace<S>> out(static_cast<size_t>(w * w));
  for (int j = 0; j < w; ++j) {
    Mat<S> r = complement_rows(j);
    for (int i = 0; i < w; ++i) out[static_cast<size_t>(i * w + j)] = prefix_from(r, i);
  }
  return out;
}

template <typename S>
Subspace<S> SplitGrid<S>::prefix(int i, int j) const {
  if (i == -1 || j == -1) return Subspace<S>(n_);
  const size_t k = at(i, j);
  if (!prefix_.empty()) return prefix_[k];
  return prefix_from(complement_rows(j), i);
}

template <typename S>
Mat<S> SplitGrid<S>::projector(int i, int j) const {
  const Index off = offset(i, j), d = dim(i, j);
  if (d == 0) return Mat<S>::Zero(n_, n_);
  return be_.matmul(Mat<S>(C_.middleCols(off, d)), Mat<S>(Cinv_.middleRows(off, d)));
}

template <typename S>
Vec<S> SplitGrid<S>::column_weights(const std::function<S(int, int)>& w) const {
  Vec<S> out(n_);
  for (int i = 0; i <= D_; ++i)
    for (int j = 0; j <= D_; ++j) {
      if (dim(i, j) == 0) continue;
      const S v = w(i, j);
      for (Index c = 0; c < dim(i, j); ++c) out(offset(i, j) + c) = v;
    }
  return out;
}

template <typename S>
Mat<S> SplitGrid<S>::weighted(const std::function<S(int, int)>& w) const {
  Vec<S> cw = column_weights(w);
  Mat<S> scaled = C_;
  for (Index c = 0; c < n_; ++c)
    for (Index r = 0; r < n_; ++r) scaled(r, c) *= cw(c);
  return be_.matmul(scaled, Cinv_);
}

template <typename S>
Mat<S> SplitGrid<S>::antidiagonal(int s) const {
  std::vector<Index> cols;
  for (int i = 0; i <= D_; ++i) {
    const int j = s - i;
    if (j < 0 || j > D_) continue;
    for (Index c = 0; c < dim(i, j); ++c) cols.push_back(offset(i, j) + c);
  }
  if (cols.empty()) return Mat<S>::Zero(n_, n_);
  return be_.matmul(gather_cols(C_, cols), gather_rows(Cinv_, cols));
}

template <typename S>
SplitSystem<S>::SplitSystem(const SchemeData& s, const DualData& dual, const DistanceData& dd, const Backend<S>& be)
    : D_(s.D), n_(s.n) {
  for (size_t k = 0; k < 4; ++k) grids_[k] = std::make_shared<const SplitGrid<S>>(kAllSplits[k], s, dual, dd, be);
}

template <typename S>
SplitSystem<S> SplitSystem<S>::from_exact(const SplitSystem<Scalar>& sys, const Backend<S>& be) {
  SplitSystem out;
  out.D_ = sys.D_;
  out.n_ = sys.n_;
  for (size_t k = 0; k < 4; ++k)
    out.grids_[k] = std::make_shared<const SplitGrid<S>>(SplitGrid<S>::from_exact(*sys.grids_[k], be));
  return out;
}

template <typename S>
SplitSystem<S> SplitSystem<S>::from_grids(std::array<SplitGrid<S>, 4> grids) {
  SplitSystem out;
  out.D_ = grids[0].D();
  out.n_ = grids[0].n();
  for (size_t k = 0; k < 4; ++k) out.grids_[k] = std::make_shared<const SplitGrid<S>>(std::move(grids[k]));
  return out;
}

template <typename S>
std::shared_ptr<const SplitGrid<S>> SplitSystem<S>::grid_ptr(SplitKind k) const {
  for (size_t t = 0; t < 4; ++t)
    if (kAllSplits[t] == k) return grids_[t];
  throw Error(ErrorKind::IndexOutOfRange, "unknown split");
}

template <typename S>
std::vector<std::vector<Index>> SplitSystem<S>::dims(SplitKind k) const {
  std::vector<std::vector<Index>> out(static_cast<size_t>(D_ + 1));
  for (int i = 0; i <= D_; ++i)
    for (int j = 0; j <= D_; ++j) out[static_cast<size_t>(i)].push_back(grid(k).dim(i, j));
  return out;
}

template <typename S>
std::vector<Mat<S>> components_by_solve(const SplitGrid<S>& g, const Mat<S>& v, const Backend<S>& be) {
  Mat<S> x = solve(g.C(), v, be);
  std::vector<Mat<S>> out;
  for (int i = 0; i <= g.D(); ++i)
    for (int j = 0; j <= g.D(); ++j) {
      const Index d = g.dim(i, j);
      if (d == 0) {
        out.push_back(Mat<S>::Zero(g.n(), v.cols()));
      } else {
        out.push_back(be.matmul(Mat<S>(g.C().middleCols(g.offset(i, j), d)), Mat<S>(x.middleRows(g.offset(i, j), d))));
      }
    }
  return out;
}

template <typename S>
void verify_split_suite(const SplitSystem<S>& sys, const SchemeData& s, const DualData& dual, const DistanceData& dd,
                        const Backend<S>& be, CheckLog& log) {
  const int D = sys.D();
  const Index n = sys.n();
  const bool dense = n <= kDenseLimit;
  const Mat<S> I = identity<S>(n);

  for (SplitKind k : kAllSplits) {
    const SplitGrid<S>& g = sys.grid(k);
    const std::string p = "split." + split_name(k) + ".";

    // containments and the prefix direct sums
    std::string contain, direct, corner;
    const std::vector<Subspace<S>> pre = g.prefixes();
    auto prefix = [&](int i, int j) {
      return i < 0 || j < 0 ? Subspace<S>(n) : pre[static_cast<size_t>(i * (D + 1) + j)];
    };
    for (int i = 0; i <= D; ++i)
      for (int j = 0; j <= D; ++j) {
        const Subspace<S>& v = pre[static_cast<size_t>(i * (D + 1) + j)];
        if (contain.empty() && (!v.contains(prefix(i - 1, j), be) || !v.contains(prefix(i, j - 1), be)))
          contain = "V" + cell_label(i, j);
        Index total = 0;
        for (int r = 0; r <= i; ++r)
          for (int t = 0; t <= j; ++t) total += g.dim(r, t);
        if (direct.empty() && total != v.dim())
          direct = "V" + cell_label(i, j) + " has dim " + std::to_string(v.dim()) + " but the cells give " +
                   std::to_string(total);
        if (direct.empty() && !v.contains(g.cell(i, j), be)) direct = "cell " + cell_label(i, j) + " outside V";
      }
    for (int i = 0; i <= D && corner.empty(); ++i) {
      if (!same_subspace(prefix(i, D), Subspace<S>::coordinate(n, star_prefix_rows(dual, k.mu, i)), be))
        corner = "V" + cell_label(i, D);
      Subspace<S> col = Subspace<S>::span(lift(s.E_sum(prefix_indices(D, k.nu, i), dd), be), be);
      if (corner.empty() && !same_subspace(prefix(D, i), col, be)) corner = "V" + cell_label(D, i);
    }
    log.record(p + "containment", "V_{i-1,j} + V_{i,j-1} in V_{i,j}", contain.empty(), contain);
    log.record(p + "prefix_direct_sum", "V_{i,j} = sum_{r<=i, s<=j} Vtilde_{r,s} (direct sum)", direct.empty(), direct);
    log.record(p + "corners", "V_{i,D} = E*-prefix, V_{D,j} = E-prefix", corner.empty(), corner);

    Index total = 0;
    for (int i = 0; i <= D; ++i)
      for (int j = 0; j <= D; ++j) total += g.dim(i, j);
    log.record(p + "direct_sum", "V = sum_{i,j} Vtilde_{i,j} (direct sum)", total == n,
               "total dimension " + std::to_string(total));

    // (a) partition and mutual annihilation; E_{i,j}E_{r,s} = C_ij (Cinv C)_{ij,rs} Cinv_rs
    log.equal(p + "partition", "sum_{i,j} E_{i,j} = I", be.matmul(g.C(), g.Cinv()), I, be);
    log.equal(p + "annihilation", "E_{i,j} E_{r,s} = delta_ir delta_js E_{i,j}", be.matmul(g.Cinv(), g.C()), I, be);
    if (dense) {
      Mat<S> total_p = Mat<S>::Zero(n, n);
      std::vector<Mat<S>> ps;
      for (int i = 0; i <= D; ++i)
        for (int j = 0; j <= D; ++j) {
          ps.push_back(g.projector(i, j));
          total_p += ps.back();
        }
      log.equal(p + "partition_dense", "sum_{i,j} E_{i,j} = I", total_p, I, be);
      double worst = 0;
      std::string where;
      const Mat<S> zero = Mat<S>::Zero(n, n);
      for (size_t a = 0; a < ps.size(); ++a)
        for (size_t b = 0; b < ps.size(); ++b) {
          const double r = residual(be.matmul(ps[a], ps[b]), a == b ? ps[a] : zero);
          if (r > worst) {
            worst = r;
            where = "cells " + std::to_string(a) + ", " + std::to_string(b);
          }
        }
      const bool ok = Backend<S>::exact ? worst == 0.0 : worst <= be.tol();
      log.record(p + "annihilation_dense", "E_{i,j} E_{r,s} = delta_ir delta_js E_{i,j}", ok, where,
                 be.exact ? "exact" : "f64", worst);
    }

    // realness and rank of every projector
    {
      std::string real, rank_w;
      double worst = 0;
      for (int i = 0; i <= D; ++i)
        for (int j = 0; j <= D; ++j) {
          Mat<S> e = g.projector(i, j);
          const double r = residual(conj(e), e);
          if (r > worst) {
            worst = r;
            real = "E" + cell_label(i, j);
          }
          if (rank_w.empty() && rank(e, be) != g.dim(i, j)) rank_w = "E" + cell_label(i, j);
        }
      const bool ok = Backend<S>::exact ? worst == 0.0 : worst <= be.tol();
      log.record(p + "real", "conj(E_{i,j}) = E_{i,j}", ok, real, be.exact ? "exact" : "f64", worst);
      log.record(p + "rank", "rank E_{i,j} = dim Vtilde_{i,j}", rank_w.empty(), rank_w);
    }

    // (e) dimension tables
    {
      std::string rows_w, cols_w;
      for (int i = 0; i <= D; ++i) {
        Index rs = 0, cs = 0;
        for (int j = 0; j <= D; ++j) {
          rs += g.dim(i, j);
          cs += g.dim(j, i);
        }
        const int star = k.mu == Dir::down ? i : D - i;
        const int eig = k.nu == Dir::down ? i : D - i;
        const Index sphere = static_cast<Index>(dual.rows(star, star).size());
        if (rows_w.empty() && rs != sphere)
          rows_w = "row " + std::to_string(i) + " sums to " + std::to_string(rs) + ", dim E*_" + std::to_string(star) +
                   "V = " + std::to_string(sphere);
        if (cols_w.empty() && cs != s.m[static_cast<size_t>(eig)])
          cols_w = "column " + std::to_string(i) + " sums to " + std::to_string(cs) + ", m_" + std::to_string(eig) +
                   " = " + std::to_string(s.m[static_cast<size_t>(eig)]);
      }
      log.record(p + "dims_rows", "dim E*_iV = row sum of dim Vtilde", rows_w.empty(), rows_w);
      log.record(p + "dims_cols", "dim E_jV = column sum of dim Vtilde", cols_w.empty(), cols_w);
    }

    // (f) conjugate stability
    {
      std::string w;
      for (int i = 0; i <= D && w.empty(); ++i)
        for (int j = 0; j <= D && w.empty(); ++j)
          if (!g.cell(i, j).contains(conj(g.cell(i, j).basis()), be)) w = "cell " + cell_label(i, j);
      log.record(p + "conj_stable", "v in Vtilde_{i,j} iff conj(v) in Vtilde_{i,j}", w.empty(), w);
    }
  }

  // (b) vanishing
  {
    std::string dd_w, uu_w;
    for (int i = 0; i <= D; ++i)
      for (int j = 0; j <= D; ++j) {
        if (i + j < D && sys.grid(kDownDown).dim(i, j) != 0 && dd_w.empty()) dd_w = "cell " + cell_label(i, j);
        if (i + j > D && sys.grid(kUpUp).dim(i, j) != 0 && uu_w.empty()) uu_w = "cell " + cell_label(i, j);
      }
    log.record("split.dd.vanishing", "E^dd_{i,j} = 0 if i+j < D", dd_w.empty(), dd_w);
    log.record("split.uu.vanishing", "E^uu_{i,j} = 0 if i+j > D", uu_w.empty(), uu_w);
  }

  // (c) transpose dualities
  for (auto [a, b, name, anchor] :
       {std::tuple{kDownDown, kUpUp, "split.transpose.dd_uu", "(E^dd_{i,j})^t = E^uu_{D-i,D-j}"},
        std::tuple{kDownUp, kUpDown, "split.transpose.du_ud", "(E^du_{i,j})^t = E^ud_{D-i,D-j}"}}) {
    double worst = 0;
    std::string where;
    for (int i = 0; i <= D; ++i)
      for (int j = 0; j <= D; ++j) {
        const double r =
            residual(Mat<S>(sys.grid(a).projector(i, j).transpose()), sys.grid(b).projector(D - i, D - j));
        if (r > worst) {
          worst = r;
          where = "cell " + cell_label(i, j);
        }
      }
    const bool ok = Backend<S>::exact ? worst == 0.0 : worst <= be.tol();
    log.record(name, anchor, ok, where, be.exact ? "exact" : "f64", worst);
  }

  // (d) orthogonality between dual grids
  for (auto [a, b, name, anchor] :
       {std::tuple{kDownDown, kUpUp, "split.orthogonality.dd_uu",
                   "<Vtilde^dd_{i,j}, Vtilde^uu_{r,s}> = 0 unless i+r = D, j+s = D"},
        std::tuple{kDownUp, kUpDown, "split.orthogonality.du_ud",
                   "<Vtilde^du_{i,j}, Vtilde^ud_{r,s}> = 0 unless i+r = D, j+s = D"}}) {
    const SplitGrid<S>& ga = sys.grid(a);
    const SplitGrid<S>& gb = sys.grid(b);
    Mat<S> gram = be.matmul(Mat<S>(ga.C().transpose()), conj(gb.C()));
    double worst = 0;
    std::string where;
    for (int i = 0; i <= D; ++i)
      for (int j = 0; j <= D; ++j)
        for (int r = 0; r <= D; ++r)
          for (int t = 0; t <= D; ++t) {
            if (i + r == D && j + t == D) continue;
            if (ga.dim(i, j) == 0 || gb.dim(r, t) == 0) continue;
            Mat<S> block = gram.block(ga.offset(i, j), gb.offset(r, t), ga.dim(i, j), gb.dim(r, t));
            const double res = residual(block, Mat<S>(Mat<S>::Zero(block.rows(), block.cols())));
            if (res > worst) {
              worst = res;
              where = cell_label(i, j) + " vs " + cell_label(r, t);
            }
          }
    const bool ok = Backend<S>::exact ? worst == 0.0 : worst <= be.tol();
    log.record(name, anchor, ok, where, be.exact ? "exact" : "f64", worst);
  }

  // (g) displacement projectors
  for (bool first_kind : {true, false}) {
    const std::string p = first_kind ? "split.phi." : "split.psi.";
    const int lo = first_kind ? 0 : -D;
    std::vector<Mat<S>> fam;
    Mat<S> total = Mat<S>::Zero(n, n);
    double cross = 0, real = 0, sym = 0;
    std::string cross_w, real_w, sym_w;
    for (int e = lo; e <= D; ++e) {
      Mat<S> m = first_kind ? sys.phi(e) : sys.psi(e);
      Mat<S> alt = first_kind ? sys.phi_alt(e) : sys.psi_alt(e);
      const std::string label = (first_kind ? "eta = " : "zeta = ") + std::to_string(e);
      double r = residual(m, alt);
      if (r > cross) cross = r, cross_w = label;
      r = residual(conj(m), m);
      if (r > real) real = r, real_w = label;
      r = residual(Mat<S>(m.transpose()), m);
      if (r > sym) sym = r, sym_w = label;
      total += m;
      if (dense) fam.push_back(std::move(m));
    }
    auto ok = [&](double w) { return Backend<S>::exact ? w == 0.0 : w <= be.tol(); };
    const std::string mode = be.exact ? "exact" : "f64";
    const std::string sym_name = first_kind ? "phi" : "psi";
    const std::string idx = first_kind ? "eta" : "zeta";
    log.record(p + "cross_expression",
               first_kind ? "sum_{i+j=D+eta} E^dd_{i,j} = sum_{i+j=D-eta} E^uu_{i,j}"
                          : "sum_{i+j=D+zeta} E^du_{i,j} = sum_{i+j=D-zeta} E^ud_{i,j}",
               ok(cross), cross_w, mode, cross);
    log.record(p + "real", "conj(" + sym_name + "_" + idx + ") = " + sym_name + "_" + idx, ok(real), real_w, mode, real);
    log.record(p + "symmetric", sym_name + "_" + idx + "^t = " + sym_name + "_" + idx, ok(sym), sym_w, mode, sym);
    log.equal(p + "partition", "sum_" + idx + " " + sym_name + "_" + idx + " = I", total, I, be);
    if (dense) {
      double worst = 0;
      std::string where;
      const Mat<S> zero = Mat<S>::Zero(n, n);
      for (size_t a = 0; a < fam.size(); ++a)
        for (size_t b = 0; b < fam.size(); ++b) {
          const double r = residual(be.matmul(fam[a], fam[b]), a == b ? fam[a] : zero);
          if (r > worst) worst = r, where = idx + " = " + std::to_string(lo + static_cast<int>(a)) + ", " +
                                             std::to_string(lo + static_cast<int>(b));
        }
      log.record(p + "orthogonal_idempotents", sym_name + "_a " + sym_name + "_b = delta_ab " + sym_name + "_a",
                 ok(worst), where, mode, worst);
    }
  }
}

template <typename S>
Displacement<S> displacement_projectors(const SplitSystem<S>& sys, const Backend<S>& be) {
  Displacement<S> out;
  const int D = sys.D();
  for (int e = 0; e <= D; ++e) {
    out.phi.push_back(sys.phi(e));
    if (!approx_equal(out.phi.back(), sys.phi_alt(e), be)) {
      throw Error(ErrorKind::CrossExpressionMismatch, "phi_" + std::to_string(e) + " differs between grids");
    }
  }
  for (int z = -D; z <= D; ++z) {
    out.psi.push_back(sys.psi(z));
    if (!approx_equal(out.psi.back(), sys.psi_alt(z), be)) {
      throw Error(ErrorKind::CrossExpressionMismatch, "psi_" + std::to_string(z) + " differs between grids");
    }
  }
  return out;
}

template class SplitGrid<Scalar>;
template class SplitGrid<Complex>;
template class SplitSystem<Scalar>;
template class SplitSystem<Complex>;
template void verify_split_suite(const SplitSystem<Scalar>&, const SchemeData&, const DualData&, const DistanceData&,
                                 const ExactBackend&, CheckLog&);
template void verify_split_suite(const SplitSystem<Complex>&, const SchemeData&, const DualData&, const DistanceData&,
                                 const FloatBackend&, CheckLog&);
template Displacement<Scalar> displacement_projectors(const SplitSystem<Scalar>&, const ExactBackend&);
template Displacement<Complex> displacement_projectors(const SplitSystem<Complex>&, const FloatBackend&);
template std::vector<ExactMat> components_by_solve(const SplitGrid<Scalar>&, const ExactMat&, const ExactBackend&);
template std::vector<FloatMat> components_by_solve(const SplitGrid<Complex>&, const FloatMat&, const FloatBackend&);

}  // namespace splitdec

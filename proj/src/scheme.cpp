#include "splitdec/scheme.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "splitdec/detail/verifier.hpp"

namespace splitdec {

namespace {

using Poly = std::vector<Integer>;

void trim(Poly& p) {
  while (p.size() > 1 && sgn(p.back()) == 0) p.pop_back();
}

// Divides by a monic divisor; returns false if the remainder is nonzero.
bool divide_monic(const Poly& num, const Poly& den, Poly& quot) {
  Poly r = num;
  const size_t dn = den.size() - 1;
  if (r.size() - 1 < dn) return false;
  quot.assign(r.size() - dn, Integer(0));
  for (size_t k = r.size() - 1; k + 1 > dn && k >= dn; --k) {
    const Integer c = r[k];
    quot[k - dn] = c;
    if (sgn(c) != 0)
      for (size_t i = 0; i <= dn; ++i) r[k - dn + i] -= c * den[i];
    if (k == dn) break;
  }
  for (size_t i = 0; i < dn; ++i)
    if (sgn(r[i]) != 0) return false;
  return true;
}

Scalar eval(const Poly& p, const Scalar& x) {
  Scalar acc(0);
  for (size_t k = p.size(); k-- > 0;) acc = acc * x + Scalar(Rational(p[k]));
  return acc;
}

std::vector<double> numeric_roots(const IntersectionData& in) {
  const int w = in.D + 1;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(w, w);
  for (int i = 0; i < w; ++i) {
    t(i, i) = static_cast<double>(in.a[static_cast<size_t>(i)]);
    if (i + 1 < w) {
      const double off = std::sqrt(static_cast<double>(in.b[static_cast<size_t>(i)]) *
                                   static_cast<double>(in.c[static_cast<size_t>(i + 1)]));
      t(i, i + 1) = t(i + 1, i) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + w);
  return out;
}

struct Factored {
  std::vector<long> integer_roots;
  std::vector<std::pair<long, long>> quadratics;  // t^2 - s t + p
};

Factored factor_char_poly(const IntersectionData& in) {
  Poly p = char_poly(in);
  std::vector<double> approx = numeric_roots(in);
  Factored f;
  std::vector<double> rest;
  for (double x : approx) {
    const long k = std::lround(x);
    Poly quot;
    if (std::fabs(x - static_cast<double>(k)) < 1e-6 && divide_monic(p, {Integer(-k), Integer(1)}, quot)) {
      f.integer_roots.push_back(k);
      p = quot;
    } else {
      rest.push_back(x);
    }
  }
  while (!rest.empty()) {
    bool found = false;
    for (size_t i = 0; i < rest.size() && !found; ++i)
      for (size_t j = i + 1; j < rest.size() && !found; ++j) {
        const long s = std::lround(rest[i] + rest[j]), pr = std::lround(rest[i] * rest[j]);
        Poly quot;
        if (divide_monic(p, {Integer(pr), Integer(-s), Integer(1)}, quot)) {
          f.quadratics.emplace_back(s, pr);
          p = quot;
          rest.erase(rest.begin() + static_cast<long>(j));
          rest.erase(rest.begin() + static_cast<long>(i));
          found = true;
        }
      }
    if (!found) {
      throw Error(ErrorKind::EigenvalueNotInField,
                  "characteristic polynomial has a factor of degree " + std::to_string(rest.size()) +
                      " with no rational or quadratic roots");
    }
  }
  return f;
}

long isqrt_exact(long v) {
  long r = std::lround(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

}  // namespace

BMCoef add(const BMCoef& x, const BMCoef& y) {
  BMCoef out = x;
  for (size_t k = 0; k < out.size(); ++k) out[k] += y[k];
  return out;
}

BMCoef scale(const BMCoef& x, const Scalar& s) {
  BMCoef out = x;
  for (auto& v : out) v *= s;
  return out;
}

BMCoef BoseMesner::A(int h) const {
  BMCoef out = zero();
  out[static_cast<size_t>(h)] = Scalar(1);
  return out;
}

BMCoef BoseMesner::mul(const BMCoef& x, const BMCoef& y) const {
  BMCoef out = zero();
  for (int a = 0; a <= D(); ++a) {
    if (x[static_cast<size_t>(a)].is_zero()) continue;
    for (int b = 0; b <= D(); ++b) {
      if (y[static_cast<size_t>(b)].is_zero()) continue;
      const Scalar xy = x[static_cast<size_t>(a)] * y[static_cast<size_t>(b)];
      for (int h = 0; h <= D(); ++h) {
        const long p = in_(h, a, b);
        if (p) out[static_cast<size_t>(h)] += xy * Scalar(p);
      }
    }
  }
  return out;
}

BMCoef BoseMesner::mul_A1(const BMCoef& x) const {
  BMCoef out = zero();
  for (int g = 0; g <= D(); ++g) {
    Scalar v = x[static_cast<size_t>(g)] * Scalar(in_.a[static_cast<size_t>(g)]);
    if (g + 1 <= D()) v += x[static_cast<size_t>(g + 1)] * Scalar(in_.b[static_cast<size_t>(g)]);
    if (g >= 1) v += x[static_cast<size_t>(g - 1)] * Scalar(in_.c[static_cast<size_t>(g)]);
    out[static_cast<size_t>(g)] = v;
  }
  return out;
}

BMCoef BoseMesner::hadamard(const BMCoef& x, const BMCoef& y) const {
  BMCoef out = zero();
  for (size_t k = 0; k < out.size(); ++k) out[k] = x[k] * y[k];
  return out;
}

ExactMat BoseMesner::dense(const BMCoef& x, const DistanceData& dd) const {
  ExactMat out(dd.n, dd.n);
  for (int i = 0; i < dd.n; ++i)
    for (int j = 0; j < dd.n; ++j) out(i, j) = x[static_cast<size_t>(dd(i, j))];
  return out;
}

ExactMat SchemeData::E(int i, const DistanceData& dd) const {
  ExactMat out(dd.n, dd.n);
  const BMCoef& c = coef[static_cast<size_t>(i)];
  for (int x = 0; x < dd.n; ++x)
    for (int y = 0; y < dd.n; ++y) out(x, y) = c[static_cast<size_t>(dd(x, y))];
  return out;
}

ExactMat SchemeData::E_sum(const std::vector<int>& idx, const DistanceData& dd) const {
  BMCoef c(static_cast<size_t>(D + 1), Scalar(0));
  for (int i : idx) c = add(c, coef[static_cast<size_t>(i)]);
  ExactMat out(dd.n, dd.n);
  for (int x = 0; x < dd.n; ++x)
    for (int y = 0; y < dd.n; ++y) out(x, y) = c[static_cast<size_t>(dd(x, y))];
  return out;
}

std::vector<Integer> char_poly(const IntersectionData& in) {
  Poly prev{Integer(1)};
  Poly cur{Integer(-in.a[0]), Integer(1)};
  for (int k = 1; k <= in.D; ++k) {
    Poly next(cur.size() + 1, Integer(0));
    for (size_t i = 0; i < cur.size(); ++i) {
      next[i + 1] += cur[i];
      next[i] -= cur[i] * in.a[static_cast<size_t>(k)];
    }
    const Integer bc = Integer(in.b[static_cast<size_t>(k - 1)]) * in.c[static_cast<size_t>(k)];
    for (size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i] * bc;
    trim(next);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

GroundField natural_field(const IntersectionData& in, int qsign) {
  Factored f = factor_char_poly(in);
  long sf = 1;
  for (auto [s, p] : f.quadratics) {
    const long disc = squarefree_part(s * s - 4 * p);
    if (sf != 1 && disc != sf) {
      throw Error(ErrorKind::EigenvalueNotInField, "eigenvalues need both sqrt(" + std::to_string(sf) + ") and sqrt(" +
                                                       std::to_string(disc) + ")");
    }
    sf = disc;
  }
  return GroundField(sf, qsign);
}

std::vector<Scalar> eigenvalues_A1(const IntersectionData& in, const GroundField& field) {
  Factored f = factor_char_poly(in);
  std::vector<Scalar> roots;
  for (long k : f.integer_roots) roots.push_back(field.lift(Rational(k)));
  for (auto [s, p] : f.quadratics) {
    const long disc = s * s - 4 * p;
    const long sf = squarefree_part(disc);
    if (field.mode() == FieldMode::rational || squarefree_part(field.b()) != sf) {
      throw Error(ErrorKind::EigenvalueNotInField,
                  "roots of t^2 - " + std::to_string(s) + "t + " + std::to_string(p) + " need sqrt(" +
                      std::to_string(sf) + "), field has b = " + std::to_string(field.b()));
    }
    // disc = k^2 sf and b = m^2 sf, so sqrt(disc) = (k/m) r
    const long k = isqrt_exact(disc / sf), m = isqrt_exact(field.b() / sf);
    const Rational half(s, 2), c(k, 2 * m);
    roots.push_back(field.make(half, c));
    roots.push_back(field.make(half, -c));
  }
  const Poly cp = char_poly(in);
  for (const Scalar& r : roots) {
    if (!eval(cp, r).is_zero()) throw Error(ErrorKind::EigenvalueNotInField, "root " + format(r) + " failed exact check");
  }
  std::stable_sort(roots.begin(), roots.end(), [&](const Scalar& x, const Scalar& y) {
    return field.to_complex(x).real() > field.to_complex(y).real();
  });
  return roots;
}

std::vector<BMCoef> primitive_idempotents(const BoseMesner& bm, const std::vector<Scalar>& theta) {
  std::vector<BMCoef> out;
  for (size_t i = 0; i < theta.size(); ++i) {
    BMCoef e = bm.identity();
    for (size_t j = 0; j < theta.size(); ++j) {
      if (j == i) continue;
      const Scalar d = theta[i] - theta[j];
      if (d.is_zero()) throw Error(ErrorKind::PropertyViolation, "repeated eigenvalue " + format(theta[i]));
      BMCoef next = bm.mul_A1(e);
      for (size_t h = 0; h < e.size(); ++h) next[h] = (next[h] - theta[j] * e[h]) / d;
      e = std::move(next);
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<Scalar> krein_parameters(const BoseMesner& bm, const std::vector<BMCoef>& E, const std::vector<long>& m) {
  const int w = bm.D() + 1;
  const IntersectionData* unused = nullptr;
  (void)unused;
  std::vector<Scalar> out(static_cast<size_t>(w * w * w));
  const Scalar n(static_cast<long>(bm.n()));
  // trace(X Y) = n sum_d x_d y_d k_d, with k_d read off A_d A_d
  std::vector<Scalar> k(static_cast<size_t>(w));
  for (int d = 0; d < w; ++d) k[static_cast<size_t>(d)] = bm.mul(bm.A(d), bm.A(d))[0];
  for (int h = 0; h < w; ++h)
    for (int i = 0; i < w; ++i)
      for (int j = 0; j < w; ++j) {
        Scalar t(0);
        for (int d = 0; d < w; ++d) {
          const size_t sd = static_cast<size_t>(d);
          t += E[static_cast<size_t>(i)][sd] * E[static_cast<size_t>(j)][sd] * E[static_cast<size_t>(h)][sd] * k[sd];
        }
        out[static_cast<size_t>((h * w + i) * w + j)] = n * n * t / Scalar(m[static_cast<size_t>(h)]);
      }
  return out;
}

SchemeData build_scheme(const IntersectionData& in, const DistanceData& dd, const GroundField& field, CheckLog* log) {
  detail::Verifier v(log);
  SchemeData s;
  s.n = dd.n;
  s.D = in.D;
  s.field = field;
  s.theta = eigenvalues_A1(in, field);
  const int w = s.D + 1;
  for (int i = 0; i < w; ++i) s.ordering.push_back(i);

  bool distinct = true;
  for (int i = 0; i < w; ++i)
    for (int j = i + 1; j < w; ++j) distinct = distinct && s.theta[static_cast<size_t>(i)] != s.theta[static_cast<size_t>(j)];
  v.check("scheme.eigenvalues.distinct", "theta_i mutually distinct", distinct, "repeated eigenvalue",
          ErrorKind::PropertyViolation);
  v.check("scheme.eigenvalues.valency", "theta_0 = k", s.theta[0] == Scalar(in.valency()),
          "theta_0 = " + format(s.theta[0]), ErrorKind::PropertyViolation);

  BoseMesner bm(in, dd.n);
  s.coef = primitive_idempotents(bm, s.theta);
  const Scalar nn(static_cast<long>(dd.n));

  {
    bool ok = true;
    for (const Scalar& c : s.coef[0]) ok = ok && c * nn == Scalar(1);
    v.check("scheme.idempotents.E0", "E_0 = |X|^-1 J", ok, "E_0 differs from J/n", ErrorKind::PropertyViolation);
  }
  {
    BMCoef total = bm.zero();
    BMCoef spectral = bm.zero();
    for (int i = 0; i < w; ++i) {
      total = add(total, s.coef[static_cast<size_t>(i)]);
      spectral = add(spectral, scale(s.coef[static_cast<size_t>(i)], s.theta[static_cast<size_t>(i)]));
    }
    v.check("scheme.idempotents.partition", "sum_i E_i = I", total == bm.identity(), "sum differs from I",
            ErrorKind::PropertyViolation);
    v.check("scheme.idempotents.spectral", "A_1 = sum_i theta_i E_i", spectral == bm.A(1),
            "spectral sum differs from A_1", ErrorKind::PropertyViolation);
  }
  {
    std::string witness;
    for (int i = 0; i < w && witness.empty(); ++i)
      for (int j = 0; j < w && witness.empty(); ++j) {
        BMCoef prod = bm.mul(s.coef[static_cast<size_t>(i)], s.coef[static_cast<size_t>(j)]);
        if (prod != (i == j ? s.coef[static_cast<size_t>(i)] : bm.zero()))
          witness = "E_" + std::to_string(i) + " E_" + std::to_string(j);
      }
    v.check("scheme.idempotents.orthogonal", "E_i E_j = delta_ij E_i", witness.empty(), witness,
            ErrorKind::PropertyViolation);
  }
  {
    bool real = true;
    for (const auto& c : s.coef)
      for (const Scalar& x : c) real = real && conj(x) == x;
    // symmetry is inherited from the symmetric A_h; the dense check below confirms it
    v.check("scheme.idempotents.real", "conj(E_i) = E_i", real, "non-real coefficient", ErrorKind::PropertyViolation);
  }
  {
    std::string witness;
    for (int i = 0; i < w && witness.empty(); ++i) {
      const Scalar tr = bm.trace(s.coef[static_cast<size_t>(i)]);
      if (!tr.is_rational() || tr.rational_part().get_den() != 1 || sgn(tr.rational_part()) <= 0) {
        witness = "trace E_" + std::to_string(i) + " = " + format(tr);
      } else {
        s.m.push_back(tr.rational_part().get_num().get_si());
      }
    }
    long total = 0;
    for (long x : s.m) total += x;
    if (witness.empty() && total != dd.n) witness = "sum of multiplicities " + std::to_string(total);
    v.check("scheme.multiplicities", "m_i = rank E_i, sum m_i = |X|", witness.empty(), witness,
            ErrorKind::PropertyViolation);
  }

  // Dense checks on the materialized matrices.
  {
    ExactMat a1 = dd.A(1);
    std::string witness;
    for (int i = 0; i < w && witness.empty(); ++i) {
      ExactMat e = s.E(i, dd);
      if (e != e.transpose()) witness = "E_" + std::to_string(i) + " not symmetric";
      else if (matmul(a1, e) != scale(e, s.theta[static_cast<size_t>(i)]))
        witness = "A_1 E_" + std::to_string(i) + " != theta_" + std::to_string(i) + " E_" + std::to_string(i);
    }
    v.check("scheme.idempotents.dense_eigen", "A_1 E_i = theta_i E_i, E_i^t = E_i", witness.empty(), witness,
            ErrorKind::PropertyViolation);
    if (dd.n <= 64) {
      std::string w2;
      for (int i = 0; i < w && w2.empty(); ++i)
        for (int j = 0; j < w && w2.empty(); ++j) {
          ExactMat prod = matmul(s.E(i, dd), s.E(j, dd));
          if (prod != (i == j ? s.E(i, dd) : ExactMat(ExactMat::Zero(dd.n, dd.n))))
            w2 = "E_" + std::to_string(i) + " E_" + std::to_string(j);
        }
      v.check("scheme.idempotents.dense_products", "E_i E_j = delta_ij E_i", w2.empty(), w2,
              ErrorKind::PropertyViolation);
    }
  }

  if (s.m.size() == static_cast<size_t>(w)) {
    s.krein = krein_parameters(bm, s.coef, s.m);
    std::string expansion, negative;
    for (int i = 0; i < w; ++i)
      for (int j = 0; j < w; ++j) {
        BMCoef lhs = scale(bm.hadamard(s.coef[static_cast<size_t>(i)], s.coef[static_cast<size_t>(j)]), nn);
        BMCoef rhs = bm.zero();
        for (int h = 0; h < w; ++h) rhs = add(rhs, scale(s.coef[static_cast<size_t>(h)], s.q(h, i, j)));
        if (lhs != rhs && expansion.empty()) expansion = "(i,j) = (" + std::to_string(i) + "," + std::to_string(j) + ")";
        for (int h = 0; h < w; ++h) {
          const Scalar& q = s.q(h, i, j);
          if ((!field.is_real(q) || field.real_sign(q) < 0) && negative.empty())
            negative = "q^" + std::to_string(h) + "_{" + std::to_string(i) + std::to_string(j) + "} = " + format(q);
        }
      }
    v.check("scheme.krein.expansion", "E_i o E_j = |X|^-1 sum_h q^h_ij E_h", expansion.empty(), expansion,
            ErrorKind::PropertyViolation);
    v.check("scheme.krein.nonnegative", "q^h_ij real and >= 0", negative.empty(), negative, ErrorKind::NegativeKrein);
  }
  v.finish();
  return s;
}

std::vector<std::vector<int>> find_qpoly_orderings(const SchemeData& s) {
  const int w = s.D + 1;
  std::vector<std::vector<int>> out;
  for (int a = 1; a < w; ++a) {
    std::vector<int> ord{0, a};
    std::vector<char> used(static_cast<size_t>(w), 0);
    used[0] = used[static_cast<size_t>(a)] = 1;
    bool ok = true;
    while (ok && static_cast<int>(ord.size()) < w) {
      int next = -1, count = 0;
      for (int h = 0; h < w; ++h)
        if (!used[static_cast<size_t>(h)] && !s.q(h, a, ord.back()).is_zero()) {
          next = h;
          ++count;
        }
      if (count != 1) {
        ok = false;
        break;
      }
      ord.push_back(next);
      used[static_cast<size_t>(next)] = 1;
    }
    if (!ok) continue;
    for (int h = 0; h < w && ok; ++h)
      for (int i = 0; i < w && ok; ++i)
        for (int j = 0; j < w && ok; ++j) {
          const bool zero = s.q(ord[static_cast<size_t>(h)], ord[static_cast<size_t>(i)], ord[static_cast<size_t>(j)]).is_zero();
          const bool greater = h > i + j || i > h + j || j > h + i;
          const bool equal = h == i + j || i == h + j || j == h + i;
          if (greater && !zero) ok = false;
          if (equal && zero) ok = false;
        }
    if (ok) out.push_back(ord);
  }
  return out;
}

SelfDualResult check_self_dual(const SchemeData& s, const std::vector<int>& ord, const IntersectionData& in) {
  const int w = s.D + 1;
  for (int h = 0; h < w; ++h)
    for (int i = 0; i < w; ++i)
      for (int j = 0; j < w; ++j) {
        const Scalar& q = s.q(ord[static_cast<size_t>(h)], ord[static_cast<size_t>(i)], ord[static_cast<size_t>(j)]);
        if (q != Scalar(in(h, i, j))) {
          return {false, "q^" + std::to_string(h) + "_{" + std::to_string(i) + "," + std::to_string(j) + "} = " +
                             format(q) + " but p = " + std::to_string(in(h, i, j))};
        }
      }
  return {true, ""};
}

SchemeData reorder(const SchemeData& s, const std::vector<int>& ord) {
  const int w = s.D + 1;
  SchemeData out = s;
  for (int i = 0; i < w; ++i) {
    const size_t o = static_cast<size_t>(ord[static_cast<size_t>(i)]);
    out.theta[static_cast<size_t>(i)] = s.theta[o];
    out.coef[static_cast<size_t>(i)] = s.coef[o];
    out.m[static_cast<size_t>(i)] = s.m[o];
    out.ordering[static_cast<size_t>(i)] = s.ordering[o];
  }
  for (int h = 0; h < w; ++h)
    for (int i = 0; i < w; ++i)
      for (int j = 0; j < w; ++j)
        out.krein[static_cast<size_t>((h * w + i) * w + j)] =
            s.q(ord[static_cast<size_t>(h)], ord[static_cast<size_t>(i)], ord[static_cast<size_t>(j)]);
  return out;
}

OrderingChoice select_ordering(const SchemeData& s, const IntersectionData& in,
                               const std::optional<std::vector<int>>& requested) {
  std::vector<std::vector<int>> all = find_qpoly_orderings(s);
  OrderingChoice choice;
  choice.candidates = static_cast<int>(all.size());
  for (const auto& o : all)
    if (check_self_dual(s, o, in).pass) ++choice.self_dual_candidates;
  if (requested) {
    if (std::find(all.begin(), all.end(), *requested) == all.end()) {
      throw Error(ErrorKind::PropertyViolation, "requested ordering is not Q-polynomial");
    }
    choice.ordering = *requested;
    choice.self_dual = check_self_dual(s, *requested, in).pass;
    return choice;
  }
  if (all.empty()) throw Error(ErrorKind::PropertyViolation, "no Q-polynomial ordering");
  for (const auto& o : all)
    if (check_self_dual(s, o, in).pass) {
      choice.ordering = o;
      choice.self_dual = true;
      return choice;
    }
  choice.ordering = all.front();
  return choice;
}

ExactMat DualData::Estar(int i) const {
  ExactMat out = ExactMat::Zero(n, n);
  for (int y = 0; y < n; ++y)
    if (shell[static_cast<size_t>(y)] == i) out(y, y) = Scalar(1);
  return out;
}

ExactMat DualData::Astar(int i) const {
  ExactMat out = ExactMat::Zero(n, n);
  for (int y = 0; y < n; ++y) out(y, y) = astar[static_cast<size_t>(i)][static_cast<size_t>(y)];
  return out;
}

std::vector<Index> DualData::rows(int lo, int hi) const {
  std::vector<Index> out;
  for (int y = 0; y < n; ++y)
    if (shell[static_cast<size_t>(y)] >= lo && shell[static_cast<size_t>(y)] <= hi) out.push_back(y);
  return out;
}

DualData dual_data(const SchemeData& s, const Graph& g, const DistanceData& dd, int x, CheckLog* log) {
  if (x < 0 || x >= dd.n) throw Error(ErrorKind::IndexOutOfRange, "base vertex " + std::to_string(x));
  detail::Verifier v(log);
  const int w = s.D + 1;
  DualData out;
  out.x = x;
  out.n = dd.n;
  out.D = s.D;
  out.shell.resize(static_cast<size_t>(dd.n));
  for (int y = 0; y < dd.n; ++y) out.shell[static_cast<size_t>(y)] = dd(x, y);

  // E_i x-hat by applying prod_{j != i} (A_1 - theta_j)/(theta_i - theta_j) to x-hat.
  const Scalar nn(static_cast<long>(dd.n));
  std::string constancy, agreement;
  for (int i = 0; i < w; ++i) {
    std::vector<Scalar> vec(static_cast<size_t>(dd.n), Scalar(0));
    vec[static_cast<size_t>(x)] = Scalar(1);
    for (int j = 0; j < w; ++j) {
      if (j == i) continue;
      const Scalar d = (s.theta[static_cast<size_t>(i)] - s.theta[static_cast<size_t>(j)]).inverse();
      std::vector<Scalar> next(static_cast<size_t>(dd.n), Scalar(0));
      for (int y = 0; y < dd.n; ++y) {
        Scalar acc = -s.theta[static_cast<size_t>(j)] * vec[static_cast<size_t>(y)];
        for (int z : g.adj[static_cast<size_t>(y)]) acc += vec[static_cast<size_t>(z)];
        next[static_cast<size_t>(y)] = acc * d;
      }
      vec = std::move(next);
    }
    std::vector<Scalar> diag(static_cast<size_t>(dd.n));
    std::vector<std::optional<Scalar>> per_shell(static_cast<size_t>(w));
    for (int y = 0; y < dd.n; ++y) {
      const Scalar val = vec[static_cast<size_t>(y)] * nn;
      diag[static_cast<size_t>(y)] = val;
      auto& slot = per_shell[static_cast<size_t>(out.shell[static_cast<size_t>(y)])];
      if (!slot) slot = val;
      else if (*slot != val && constancy.empty())
        constancy = "|X|(E_" + std::to_string(i) + ")_{xy} varies on shell " + std::to_string(out.shell[static_cast<size_t>(y)]);
      if (val != s.coef[static_cast<size_t>(i)][static_cast<size_t>(out.shell[static_cast<size_t>(y)])] * nn &&
          agreement.empty())
        agreement = "E_" + std::to_string(i) + " x-hat differs at y = " + std::to_string(y);
    }
    if (i == 1) {
      for (int h = 0; h < w; ++h) out.thetastar.push_back(per_shell[static_cast<size_t>(h)].value_or(Scalar(0)));
    }
    out.astar.push_back(std::move(diag));
  }
  if (w == 1) out.thetastar.push_back(Scalar(static_cast<long>(dd.n)));
  v.check("dual.constant_on_spheres", "|X|(E_i)_xy depends only on d(x,y)", constancy.empty(), constancy,
          ErrorKind::NonConstantOnSphere);
  v.check("dual.coefficients_agree", "(A*_i)_yy = |X|(E_i)_xy", agreement.empty(), agreement,
          ErrorKind::PropertyViolation);

  bool identity0 = true;
  for (const Scalar& d : out.astar[0]) identity0 = identity0 && d == Scalar(1);
  v.check("dual.astar0_identity", "A*_0 = I", identity0, "A*_0 != I", ErrorKind::PropertyViolation);

  std::vector<int> shell_count(static_cast<size_t>(w), 0);
  for (int sh : out.shell) ++shell_count[static_cast<size_t>(sh)];
  bool partition = true;
  for (int c : shell_count) partition = partition && c > 0;
  v.check("dual.estar_partition", "sum_i E*_i = I, E*_i E*_j = delta_ij E*_i", partition,
          "empty shell", ErrorKind::PropertyViolation);

  bool distinct = true;
  for (int i = 0; i < w; ++i)
    for (int j = i + 1; j < w; ++j)
      distinct = distinct && out.thetastar[static_cast<size_t>(i)] != out.thetastar[static_cast<size_t>(j)];
  v.check("dual.thetastar_distinct", "theta*_i mutually distinct", distinct, "repeated dual eigenvalue",
          ErrorKind::PropertyViolation);

  bool spectral = true;
  for (int y = 0; y < dd.n; ++y)
    spectral = spectral && out.astar[1][static_cast<size_t>(y)] == out.thetastar[static_cast<size_t>(out.shell[static_cast<size_t>(y)])];
  v.check("dual.spectral", "A*_1 = sum_i theta*_i E*_i", spectral, "A*_1 differs", ErrorKind::PropertyViolation);

  std::string product;
  for (int i = 0; i < w && product.empty(); ++i)
    for (int j = 0; j < w && product.empty(); ++j)
      for (int y = 0; y < dd.n; ++y) {
        Scalar rhs(0);
        for (int h = 0; h < w; ++h) rhs += s.q(h, i, j) * out.astar[static_cast<size_t>(h)][static_cast<size_t>(y)];
        if (out.astar[static_cast<size_t>(i)][static_cast<size_t>(y)] * out.astar[static_cast<size_t>(j)][static_cast<size_t>(y)] != rhs) {
          product = "A*_" + std::to_string(i) + " A*_" + std::to_string(j) + " at y = " + std::to_string(y);
          break;
        }
      }
  v.check("dual.product_rule", "A*_i A*_j = sum_h q^h_ij A*_h", product.empty(), product,
          ErrorKind::ProductRuleViolation);
  v.finish();
  return out;
}

}  // namespace splitdec

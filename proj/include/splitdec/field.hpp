#pragma once

// Exact arithmetic in Q(r) with r^2 = b, plus the ground-field bookkeeping
// that decides which square root q of b the rest of the library works with.

#include <complex>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "splitdec/error.hpp"

namespace splitdec {

using Rational = mpq_class;
using Integer = mpz_class;

/// Element a0 + a1*r of Q(r), r the principal square root of the radicand
/// (r = sqrt(b) for b > 0, r = i*sqrt(-b) for b < 0).
///
/// A scalar only remembers the radicand it was built against; a scalar with
/// a1 == 0 is an ordinary rational and mixes freely with any radicand.
class Scalar {
 public:
  Scalar() = default;
  Scalar(int v) : a0_(v) {}  // NOLINT: implicit from literals is what Eigen expects
  Scalar(long v) : a0_(v) {}  // NOLINT
  Scalar(const Rational& a0) : a0_(a0) {}  // NOLINT
  Scalar(Rational a0, Rational a1, long radicand);

  const Rational& rational_part() const { return a0_; }
  const Rational& root_part() const { return a1_; }
  long radicand() const { return b_; }

  bool is_zero() const { return sgn(a0_) == 0 && sgn(a1_) == 0; }
  bool is_rational() const { return sgn(a1_) == 0; }

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  Scalar operator-() const;

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.a0_ == b.a0_ && a.a1_ == b.a1_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// Multiplicative inverse; throws DivideByZero on zero.
  Scalar inverse() const;

 private:
  long merged_radicand(const Scalar& o) const;

  Rational a0_{0};
  Rational a1_{0};
  long b_{0};
};

/// Complex conjugate: identity unless the radicand is negative.
Scalar conj(const Scalar& s);

/// Norm a0^2 - b*a1^2 (product with the Galois conjugate).
Rational norm(const Scalar& s);

double abs(const Scalar& s);  // via the complex embedding of r

enum class FieldMode { rational, quadratic };

/// The field Q(q) with q^2 = b.  In rational mode b is a perfect square and q
/// folds to the rational qsign*sqrt(b); in quadratic mode q = qsign*r.
class GroundField {
 public:
  GroundField() : GroundField(1, +1) {}
  GroundField(long b, int qsign = +1);

  long b() const { return b_; }
  FieldMode mode() const { return mode_; }
  int qsign() const { return qsign_; }

  /// Same radicand with the other square root selected as q.
  GroundField flipped() const { return GroundField(b_, -qsign_); }

  Scalar q() const;
  Scalar qpow(long n) const;
  /// [n]_q = (q^n - q^-n) / (q - q^-1).
  Scalar qint(long n) const;

  Scalar lift(const Rational& v) const { return Scalar(v); }
  /// a0 + a1*r in this field (a1 must be zero in rational mode).
  Scalar make(const Rational& a0, const Rational& a1) const;

  /// Field automorphism r -> -r.  Only meaningful in quadratic mode.
  Scalar sigma(const Scalar& s) const;

  bool is_real(const Scalar& s) const { return b_ > 0 || s.is_rational(); }
  /// Exact sign of a real scalar (-1, 0, +1).  Throws on non-real input.
  int real_sign(const Scalar& s) const;

  std::complex<double> root_value() const;
  std::complex<double> to_complex(const Scalar& s) const;

  friend bool operator==(const GroundField& a, const GroundField& b) {
    return a.b_ == b.b_ && a.qsign_ == b.qsign_;
  }

 private:
  long b_;
  int qsign_;
  FieldMode mode_;
  Integer sqrt_b_;  // rational mode only
};

/// Textual encoding used in reports and matrix dumps: `a0`, `a0+a1*r`,
/// `a0-a1*r`; rationals as `p/q` with `/q` omitted when q == 1.
std::string format(const Scalar& s);
Scalar parse_scalar(std::string_view text, const GroundField& field);

inline std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << format(s); }

bool is_perfect_square(long v);
long squarefree_part(long v);

}  // namespace splitdec

#include "splitdec/field.hpp"

#include <cmath>
#include <sstream>

namespace splitdec {

namespace {

Rational rational_power(const Rational& base, long exponent) {
  Rational result = 1;
  Rational factor = base;
  unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent)
                                 : static_cast<unsigned long>(exponent);
  while (e != 0) {
    if (e & 1UL) result *= factor;
    factor *= factor;
    e >>= 1;
  }
  if (exponent < 0) {
    if (sgn(result) == 0) throw Error(ErrorKind::DivideByZero, "zero to a negative power");
    result = 1 / result;
  }
  return result;
}

long floor_div2(long n) { return n >= 0 ? n / 2 : -((-n + 1) / 2); }

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw Error(ErrorKind::ParseError, "empty rational");
  try {
    Rational v(std::string(text), 10);
    if (sgn(v.get_den()) == 0) throw Error(ErrorKind::ParseError, "zero denominator");
    v.canonicalize();
    return v;
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::ParseError, "bad rational '" + std::string(text) + "'");
  }
}

}  // namespace

bool is_perfect_square(long v) {
  if (v < 0) return false;
  Integer z(v);
  return mpz_perfect_square_p(z.get_mpz_t()) != 0;
}

long squarefree_part(long v) {
  if (v == 0) return 0;
  long sign = v < 0 ? -1 : 1;
  long m = v < 0 ? -v : v;
  long out = 1;
  for (long p = 2; p * p <= m; ++p) {
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e % 2 == 1) out *= p;
  }
  return sign * out * m;
}

Scalar::Scalar(Rational a0, Rational a1, long radicand)
    : a0_(std::move(a0)), a1_(std::move(a1)), b_(radicand) {
  a0_.canonicalize();
  a1_.canonicalize();
  if (sgn(a1_) != 0 && b_ == 0) {
    throw Error(ErrorKind::FieldMismatch, "root part without a radicand");
  }
}

long Scalar::merged_radicand(const Scalar& o) const {
  if (b_ == o.b_ || o.b_ == 0) return b_;
  if (b_ == 0) return o.b_;
  if (sgn(a1_) == 0 && sgn(o.a1_) == 0) return b_;
  if (sgn(a1_) == 0) return o.b_;
  if (sgn(o.a1_) == 0) return b_;
  throw Error(ErrorKind::FieldMismatch, "scalars from Q(sqrt " + std::to_string(b_) +
                                            ") and Q(sqrt " + std::to_string(o.b_) + ")");
}

Scalar& Scalar::operator+=(const Scalar& o) {
  b_ = merged_radicand(o);
  a0_ += o.a0_;
  if (sgn(o.a1_) != 0) a1_ += o.a1_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  b_ = merged_radicand(o);
  a0_ -= o.a0_;
  if (sgn(o.a1_) != 0) a1_ -= o.a1_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  long b = merged_radicand(o);
  if (sgn(a1_) == 0 && sgn(o.a1_) == 0) {
    a0_ *= o.a0_;
    b_ = b;
    return *this;
  }
  Rational c0 = a0_ * o.a0_ + a1_ * o.a1_ * b;
  Rational c1 = a0_ * o.a1_ + a1_ * o.a0_;
  a0_ = std::move(c0);
  a1_ = std::move(c1);
  b_ = b;
  return *this;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DivideByZero, "inverse of zero");
  if (sgn(a1_) == 0) return Scalar(Rational(1) / a0_, Rational(0), b_);
  Rational n = norm(*this);
  if (sgn(n) == 0) throw Error(ErrorKind::FieldMismatch, "zero divisor: radicand is a square");
  return Scalar(a0_ / n, -a1_ / n, b_);
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw Error(ErrorKind::DivideByZero, "division by zero scalar");
  if (sgn(o.a1_) == 0) {
    b_ = merged_radicand(o);
    a0_ /= o.a0_;
    if (sgn(a1_) != 0) a1_ /= o.a0_;
    return *this;
  }
  return *this *= o.inverse();
}

Scalar Scalar::operator-() const {
  Scalar out = *this;
  out.a0_ = -out.a0_;
  out.a1_ = -out.a1_;
  return out;
}

Scalar conj(const Scalar& s) {
  if (s.radicand() >= 0 || s.is_rational()) return s;
  return Scalar(s.rational_part(), -s.root_part(), s.radicand());
}

Rational norm(const Scalar& s) {
  return s.rational_part() * s.rational_part() -
         s.root_part() * s.root_part() * Rational(s.radicand());
}

double abs(const Scalar& s) {
  double a0 = s.rational_part().get_d();
  if (s.is_rational()) return std::fabs(a0);
  double a1 = s.root_part().get_d();
  double b = static_cast<double>(s.radicand());
  if (b > 0) return std::fabs(a0 + a1 * std::sqrt(b));
  return std::hypot(a0, a1 * std::sqrt(-b));
}

GroundField::GroundField(long b, int qsign) : b_(b), qsign_(qsign) {
  if (b == 0) throw Error(ErrorKind::DegenerateParameters, "radicand b must be nonzero");
  if (qsign != 1 && qsign != -1) throw Error(ErrorKind::ConfigError, "qsign must be +1 or -1");
  if (is_perfect_square(b)) {
    mode_ = FieldMode::rational;
    mpz_sqrt(sqrt_b_.get_mpz_t(), Integer(b).get_mpz_t());
  } else {
    mode_ = FieldMode::quadratic;
  }
}

Scalar GroundField::q() const {
  if (mode_ == FieldMode::rational) return Scalar(Rational(sqrt_b_ * qsign_));
  return Scalar(Rational(0), Rational(qsign_), b_);
}

Scalar GroundField::qpow(long n) const {
  if (mode_ == FieldMode::rational) {
    return Scalar(rational_power(Rational(sqrt_b_ * qsign_), n));
  }
  long k = floor_div2(n);
  Rational scale = rational_power(Rational(b_), k);
  if (n - 2 * k == 0) return Scalar(scale, Rational(0), b_);
  return Scalar(Rational(0), scale * qsign_, b_);
}

Scalar GroundField::qint(long n) const {
  Scalar den = q() - qpow(-1);
  if (den.is_zero()) throw Error(ErrorKind::DivideByZero, "[n]_q undefined for q^2 = 1");
  return (qpow(n) - qpow(-n)) / den;
}

Scalar GroundField::make(const Rational& a0, const Rational& a1) const {
  if (sgn(a1) == 0) return Scalar(a0, Rational(0), mode_ == FieldMode::quadratic ? b_ : 0);
  if (mode_ == FieldMode::rational) {
    throw Error(ErrorKind::FieldMismatch, "root part in rational mode");
  }
  return Scalar(a0, a1, b_);
}

Scalar GroundField::sigma(const Scalar& s) const {
  if (mode_ == FieldMode::rational) {
    throw Error(ErrorKind::CalledInRationalMode, "q -> -q is not a field automorphism of Q");
  }
  if (s.is_rational()) return s;
  return Scalar(s.rational_part(), -s.root_part(), s.radicand());
}

int GroundField::real_sign(const Scalar& s) const {
  int s0 = sgn(s.rational_part());
  int s1 = sgn(s.root_part());
  if (s1 == 0) return s0;
  if (b_ < 0) throw Error(ErrorKind::FieldMismatch, "sign of a non-real scalar");
  if (s0 == 0) return s1;
  if (s0 == s1) return s0;
  Rational lhs = s.rational_part() * s.rational_part();
  Rational rhs = s.root_part() * s.root_part() * Rational(b_);
  int c = cmp(lhs, rhs);
  if (c > 0) return s0;
  if (c < 0) return s1;
  return 0;
}

std::complex<double> GroundField::root_value() const {
  double m = std::sqrt(std::fabs(static_cast<double>(b_)));
  return b_ > 0 ? std::complex<double>(m, 0.0) : std::complex<double>(0.0, m);
}

std::complex<double> GroundField::to_complex(const Scalar& s) const {
  std::complex<double> out(s.rational_part().get_d(), 0.0);
  if (!s.is_rational()) out += s.root_part().get_d() * root_value();
  return out;
}

std::string format(const Scalar& s) {
  std::string out = s.rational_part().get_str();
  if (s.is_rational()) return out;
  const Rational& a1 = s.root_part();
  if (sgn(a1) > 0) {
    out += "+" + a1.get_str();
  } else {
    out += a1.get_str();
  }
  return out + "*r";
}

Scalar parse_scalar(std::string_view text, const GroundField& field) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.size() < 2 || text.substr(text.size() - 2) != "*r") {
    return field.lift(parse_rational(text));
  }
  std::string_view body = text.substr(0, text.size() - 2);
  size_t split = std::string_view::npos;
  for (size_t i = body.size(); i-- > 1;) {
    if (body[i] == '+' || body[i] == '-') {
      split = i;
      break;
    }
  }
  if (split == std::string_view::npos) {
    throw Error(ErrorKind::ParseError, "expected a0+a1*r, got '" + std::string(text) + "'");
  }
  std::string_view a1_text = body.substr(split);
  if (a1_text.front() == '+') a1_text.remove_prefix(1);
  return field.make(parse_rational(body.substr(0, split)), parse_rational(a1_text));
}

}  // namespace splitdec

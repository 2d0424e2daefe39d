#include "splitdec/matrix.hpp"

#include <sstream>

#include "splitdec/detail/intmat.hpp"

namespace splitdec {

namespace {

long radicand_of(const ExactMat& a, const ExactMat& b) {
  long found = 0;
  auto scan = [&found](const ExactMat& m) {
    for (Index k = 0; k < m.size(); ++k) {
      const Scalar& s = m.data()[k];
      if (s.radicand() == 0) continue;
      if (!s.is_rational()) {
        if (found != 0 && found != s.radicand()) {
          throw Error(ErrorKind::FieldMismatch, "matmul: entries from different quadratic fields");
        }
        found = s.radicand();
      } else if (found == 0) {
        found = s.radicand();
      }
    }
  };
  scan(a);
  scan(b);
  return found;
}

}  // namespace

bool all_rational(const ExactMat& m) {
  for (Index k = 0; k < m.size(); ++k)
    if (!m.data()[k].is_rational()) return false;
  return true;
}

bool is_zero(const ExactMat& m) {
  for (Index k = 0; k < m.size(); ++k)
    if (!m.data()[k].is_zero()) return false;
  return true;
}

ExactMat matmul(const ExactMat& a, const ExactMat& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                              " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  const Index m = a.rows(), k = a.cols(), n = b.cols();
  if (m * k * n <= 4096) {
    ExactMat out = ExactMat::Zero(m, n);
    for (Index i = 0; i < m; ++i)
      for (Index l = 0; l < k; ++l) {
        if (a(i, l).is_zero()) continue;
        for (Index j = 0; j < n; ++j)
          if (!b(l, j).is_zero()) out(i, j) += a(i, l) * b(l, j);
      }
    return out;
  }
  using detail::Part;
  const long radicand = radicand_of(a, b);
  const bool ra = !all_rational(a), rb = !all_rational(b);
  std::vector<Rational> c0 = detail::rational_matmul(a, Part::rational, b, Part::rational);
  std::vector<Rational> c1(c0.size());
  if (ra && rb) {
    std::vector<Rational> t = detail::rational_matmul(a, Part::root, b, Part::root);
    for (size_t e = 0; e < c0.size(); ++e)
      if (sgn(t[e]) != 0) c0[e] += t[e] * radicand;
  }
  if (rb) {
    std::vector<Rational> t = detail::rational_matmul(a, Part::rational, b, Part::root);
    for (size_t e = 0; e < c1.size(); ++e) c1[e] += t[e];
  }
  if (ra) {
    std::vector<Rational> t = detail::rational_matmul(a, Part::root, b, Part::rational);
    for (size_t e = 0; e < c1.size(); ++e) c1[e] += t[e];
  }
  ExactMat out(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) {
      const size_t e = static_cast<size_t>(i * n + j);
      out(i, j) = Scalar(std::move(c0[e]), std::move(c1[e]), radicand);
    }
  return out;
}

FloatMat matmul(const FloatMat& a, const FloatMat& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::ShapeMismatch, "matmul: inner dimensions differ");
  return a * b;
}

double max_abs(const ExactMat& m) {
  double worst = 0.0;
  for (Index k = 0; k < m.size(); ++k) worst = std::max(worst, abs(m.data()[k]));
  return worst;
}

double max_abs(const FloatMat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

FloatMat to_float(const ExactMat& m, const GroundField& field) {
  FloatMat out(m.rows(), m.cols());
  for (Index k = 0; k < m.size(); ++k) out.data()[k] = field.to_complex(m.data()[k]);
  return out;
}

std::string dump_matrix(const ExactMat& m, const GroundField& field) {
  std::ostringstream os;
  os << m.rows() << ' ' << m.cols() << ' ' << field.b() << ' '
     << (field.mode() == FieldMode::rational ? "rational" : "quadratic") << ' '
     << (field.qsign() > 0 ? "+1" : "-1") << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << format(m(i, j));
    }
    os << '\n';
  }
  return os.str();
}

ExactMat parse_matrix(const std::string& text, GroundField* field_out) {
  std::istringstream is(text);
  long rows = -1, cols = -1, b = 0;
  std::string mode, qsign;
  if (!(is >> rows >> cols >> b >> mode >> qsign) || rows < 0 || cols < 0) {
    throw Error(ErrorKind::ParseError, "matrix dump: bad header");
  }
  if (qsign != "+1" && qsign != "-1") throw Error(ErrorKind::ParseError, "matrix dump: bad qsign '" + qsign + "'");
  GroundField field(b, qsign == "+1" ? 1 : -1);
  const char* expect = field.mode() == FieldMode::rational ? "rational" : "quadratic";
  if (mode != expect) throw Error(ErrorKind::ParseError, "matrix dump: mode '" + mode + "' inconsistent with b");
  ExactMat out(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      std::string tok;
      if (!(is >> tok)) throw Error(ErrorKind::ParseError, "matrix dump: truncated at row " + std::to_string(i));
      out(i, j) = parse_scalar(tok, field);
    }
  std::string extra;
  if (is >> extra) throw Error(ErrorKind::ParseError, "matrix dump: trailing data");
  if (field_out) *field_out = field;
  return out;
}

}  // namespace splitdec

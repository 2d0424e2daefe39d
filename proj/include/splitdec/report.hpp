#pragma once

// Named verification results shared by every suite.

#include <cstdio>
#include <string>
#include <vector>

#include "splitdec/linalg.hpp"

namespace splitdec {

enum class Status { pass, fail, skipped };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skipped: return "skipped";
  }
  return "?";
}

struct Check {
  std::string name;
  std::string anchor;  // formula label the check asserts
  Status status = Status::pass;
  std::string mode = "exact";
  std::string max_residual = "0";
  std::string witness;
  std::string branch;  // qtet checks only: "b>1" or "b<-1"
};

std::string residual_string(double r, bool exact);

class CheckLog {
 public:
  Check& add(Check c) {
    checks_.push_back(std::move(c));
    return checks_.back();
  }

  void record(const std::string& name, const std::string& anchor, bool ok, const std::string& witness = "",
              const std::string& mode = "exact", double residual = 0.0) {
    Check c{name, anchor, ok ? Status::pass : Status::fail, mode, "0", ok ? "" : witness, ""};
    c.max_residual = residual_string(residual, mode == "exact");
    if (mode == "exact" && !ok && residual == 0.0) c.max_residual = "nonzero";
    add(std::move(c));
  }

  void skip(const std::string& name, const std::string& anchor, const std::string& why) {
    add(Check{name, anchor, Status::skipped, "exact", "0", why, ""});
  }

  /// Compares two matrices; exact backends require equality, float backends
  /// a max-abs residual within tol relative to the operand size.
  template <typename S>
  bool equal(const std::string& name, const std::string& anchor, const Mat<S>& a, const Mat<S>& b,
             const Backend<S>& be, const std::string& where = "") {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
      record(name, anchor, false, where + " shape mismatch", be.exact ? "exact" : "f64", 0.0);
      return false;
    }
    const double r = residual(a, b);
    bool ok;
    double reported = r;
    if constexpr (Backend<S>::exact) {
      ok = r == 0.0;
    } else {
      const double scale = std::max(1.0, std::max(max_abs(a), max_abs(b)));
      reported = r / scale;
      ok = reported <= be.tol();
    }
    std::string witness;
    if (!ok) witness = where.empty() ? "max residual " + residual_string(r, false) : where;
    record(name, anchor, ok, witness, be.exact ? "exact" : "f64", reported);
    return ok;
  }

  const std::vector<Check>& checks() const { return checks_; }
  std::vector<Check>& checks() { return checks_; }
  bool all_pass() const {
    for (const auto& c : checks_)
      if (c.status == Status::fail) return false;
    return true;
  }
  void append(const CheckLog& other) { checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end()); }

 private:
  std::vector<Check> checks_;
};

inline std::string residual_string(double r, bool exact) {
  if (exact && r == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", r);
  return buf;
}

}  // namespace splitdec

#pragma once

#include <optional>

#include "splitdec/report.hpp"

namespace splitdec::detail {

/// Records checks into an optional log and remembers the first failure so
/// it can be thrown once every check has run.
class Verifier {
 public:
  explicit Verifier(CheckLog* log) : log_(log) {}

  bool check(const std::string& name, const std::string& anchor, bool ok, const std::string& witness,
             ErrorKind kind) {
    if (log_) log_->record(name, anchor, ok, witness);
    if (!ok && !first_) first_ = Error(kind, name + ": " + witness);
    return ok;
  }

  void finish() const {
    if (first_) throw *first_;
  }

 private:
  CheckLog* log_;
  std::optional<Error> first_;
};

}  // namespace splitdec::detail

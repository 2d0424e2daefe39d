#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace splitdec {

enum class ErrorKind {
  DivideByZero,
  CalledInRationalMode,
  FieldMismatch,
  ShapeMismatch,
  SingularMatrix,
  AmbientMismatch,
  NotADirectSum,
  IndexOutOfRange,
  UnsupportedFieldOrder,
  DegenerateParameters,
  Disconnected,
  NotDistanceRegular,
  ParseError,
  LoopOrMultiEdge,
  EigenvalueNotInField,
  PropertyViolation,
  NegativeKrein,
  NonConstantOnSphere,
  ProductRuleViolation,
  CrossExpressionMismatch,
  NotClassicalAlphaBMinusOne,
  BEqualsOne,
  AlphaFitFailure,
  AmbiguousClassical,
  SpectralMismatch,
  TableViolation,
  SingularFactor,
  NotFullySplit,
  NonContiguousSupport,
  SuiteInapplicable,
  CacheCorrupt,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace splitdec

#include "splitdec/error.hpp"

namespace splitdec {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivideByZero: return "DivideByZero";
    case ErrorKind::CalledInRationalMode: return "CalledInRationalMode";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::AmbientMismatch: return "AmbientMismatch";
    case ErrorKind::NotADirectSum: return "NotADirectSum";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::UnsupportedFieldOrder: return "UnsupportedFieldOrder";
    case ErrorKind::DegenerateParameters: return "DegenerateParameters";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::NotDistanceRegular: return "NotDistanceRegular";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::LoopOrMultiEdge: return "LoopOrMultiEdge";
    case ErrorKind::EigenvalueNotInField: return "EigenvalueNotInField";
    case ErrorKind::PropertyViolation: return "PropertyViolation";
    case ErrorKind::NegativeKrein: return "NegativeKrein";
    case ErrorKind::NonConstantOnSphere: return "NonConstantOnSphere";
    case ErrorKind::ProductRuleViolation: return "ProductRuleViolation";
    case ErrorKind::CrossExpressionMismatch: return "CrossExpressionMismatch";
    case ErrorKind::NotClassicalAlphaBMinusOne: return "NotClassicalAlphaBMinusOne";
    case ErrorKind::BEqualsOne: return "BEqualsOne";
    case ErrorKind::AlphaFitFailure: return "AlphaFitFailure";
    case ErrorKind::AmbiguousClassical: return "AmbiguousClassical";
    case ErrorKind::SpectralMismatch: return "SpectralMismatch";
    case ErrorKind::TableViolation: return "TableViolation";
    case ErrorKind::SingularFactor: return "SingularFactor";
    case ErrorKind::NotFullySplit: return "NotFullySplit";
    case ErrorKind::NonContiguousSupport: return "NonContiguousSupport";
    case ErrorKind::SuiteInapplicable: return "SuiteInapplicable";
    case ErrorKind::CacheCorrupt: return "CacheCorrupt";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace splitdec

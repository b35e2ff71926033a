#include "herglotz/errors.hpp"

namespace herglotz {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InsufficientMargin: return "InsufficientMargin";
    case ErrorKind::LadderTooShort: return "LadderTooShort";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::StepNotDividing: return "StepNotDividing";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::InvalidRegime: return "InvalidRegime";
    case ErrorKind::AxisOutOfRange: return "AxisOutOfRange";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::EvaluationError: return "EvaluationError";
    case ErrorKind::NoFreeBoundary: return "NoFreeBoundary";
    case ErrorKind::NotZFree: return "NotZFree";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace herglotz

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace herglotz {

enum class ErrorKind {
  InvalidArgument,
  InsufficientMargin,
  LadderTooShort,
  GridMismatch,
  StepNotDividing,
  TooFewSamples,
  InvalidRegime,
  AxisOutOfRange,
  SyntaxError,
  UnknownIdentifier,
  UnboundVariable,
  DomainError,
  EvaluationError,
  NoFreeBoundary,
  NotZFree,
  SchemaError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Library-wide exception. Every failure carries a kind so callers (the CLI in
/// particular) can map it onto an exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failures remember the 1-based character position of the offending
/// token (end of input counts as one past the last character).
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error(ErrorKind::SyntaxError,
              message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace herglotz

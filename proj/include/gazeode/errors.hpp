#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gazeode {

enum class ErrorKind {
  // I/O
  Io,
  // input validation
  MalformedRow,
  NonMonotonicTime,
  EmptyFile,
  InvalidGoodness,
  InvalidValue,
  InvalidArgument,
  AmbiguousMatch,
  MissingTrack,
  EmptyInput,
  NoEndingFixations,
  ZeroPeriod,
  DegenerateData,
  ShapeMismatch,
  // numerics
  SingularState,
  NonFinite,
  InsufficientQuadrature,
  DivergedTraining,
};

enum class ErrorCategory { Io = 1, Validation = 2, Numeric = 3 };

std::string_view to_string(ErrorKind kind) noexcept;
ErrorCategory category_of(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind; the CLI maps the
/// kind's category onto its exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_of(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace gazeode

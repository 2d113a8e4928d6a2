#include "gazeode/errors.hpp"

namespace gazeode {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Io: return "IoError";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorKind::EmptyFile: return "EmptyFile";
    case ErrorKind::InvalidGoodness: return "InvalidGoodness";
    case ErrorKind::InvalidValue: return "InvalidValue";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::AmbiguousMatch: return "AmbiguousMatch";
    case ErrorKind::MissingTrack: return "MissingTrack";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::NoEndingFixations: return "NoEndingFixations";
    case ErrorKind::ZeroPeriod: return "ZeroPeriod";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::SingularState: return "SingularState";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::InsufficientQuadrature: return "InsufficientQuadrature";
    case ErrorKind::DivergedTraining: return "DivergedTraining";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Io:
      return ErrorCategory::Io;
    case ErrorKind::SingularState:
    case ErrorKind::NonFinite:
    case ErrorKind::InsufficientQuadrature:
    case ErrorKind::DivergedTraining:
      return ErrorCategory::Numeric;
    default:
      return ErrorCategory::Validation;
  }
}

}  // namespace gazeode

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tracial {

enum class ErrorCode {
  NonFinite,
  ConvergenceFailure,
  SingularMatrix,
  DimensionMismatch,
  NotHermitian,
  DegeneratePencil,
  RepeatedRealRoot,
  OriginUndefined,
  NonIntegrable,
  QuadratureFailure,
  ZeroLambda,
  InvalidP,
  NotPSD,
  GenerationFailure,
  InvalidArgument,
  ParseError,
  IOError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::DegeneratePencil: return "DegeneratePencil";
    case ErrorCode::RepeatedRealRoot: return "RepeatedRealRoot";
    case ErrorCode::OriginUndefined: return "OriginUndefined";
    case ErrorCode::NonIntegrable: return "NonIntegrable";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::ZeroLambda: return "ZeroLambda";
    case ErrorCode::InvalidP: return "InvalidP";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::GenerationFailure: return "GenerationFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IOError: return "IOError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so that
/// front ends can map it to an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tracial

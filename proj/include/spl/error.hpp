#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spl {

enum class ErrorCode {
  NonHermitianInput,
  ConvergenceFailure,
  EmptySelection,
  AmbiguousEdge,
  DimensionMismatch,
  EmptyInnerComponent,
  GapEndpointMissing,
  NotAGap,
  InnerOutsideGap,
  InfeasibleParams,
  RegimeViolation,
  DomainViolation,
  SingularDenominator,
  NotAGraph,
  RankMismatch,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::AmbiguousEdge: return "AmbiguousEdge";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyInnerComponent: return "EmptyInnerComponent";
    case ErrorCode::GapEndpointMissing: return "GapEndpointMissing";
    case ErrorCode::NotAGap: return "NotAGap";
    case ErrorCode::InnerOutsideGap: return "InnerOutsideGap";
    case ErrorCode::InfeasibleParams: return "InfeasibleParams";
    case ErrorCode::RegimeViolation: return "RegimeViolation";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::SingularDenominator: return "SingularDenominator";
    case ErrorCode::NotAGraph: return "NotAGraph";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Disposition failures (EmptyInnerComponent, GapEndpointMissing, NotAGap,
/// InnerOutsideGap) are grouped under this predicate.
constexpr bool is_disposition_violation(ErrorCode code) {
  return code == ErrorCode::EmptyInnerComponent || code == ErrorCode::GapEndpointMissing ||
         code == ErrorCode::NotAGap || code == ErrorCode::InnerOutsideGap;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  /// Attaches the spectral value that triggered the failure (disposition errors).
  Error(ErrorCode code, const std::string& what, double offending)
      : Error(code, what) {
    offending_ = offending;
    has_offending_ = true;
  }

  ErrorCode code() const noexcept { return code_; }
  bool has_offending_value() const noexcept { return has_offending_; }
  double offending_value() const noexcept { return offending_; }

 private:
  ErrorCode code_;
  double offending_ = 0.0;
  bool has_offending_ = false;
};

}  // namespace spl

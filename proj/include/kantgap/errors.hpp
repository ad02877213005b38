#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kantgap {

enum class ErrorCode {
  NegativeWeight,
  LengthMismatch,
  DimensionMismatch,
  InvalidSpace,
  NegativeScale,
  NegativeMass,
  InfeasibleMass,
  NotProbability,
  EpsilonOutOfRange,
  NotInV,
  NonMonotoneLevels,
  InfiniteLevel,
  PreconditionViolated,
  NotApplicable,
  NotSquare,
  DensityUndefined,
  DeficitMismatch,
  InvalidArgument,
  InstanceTooLarge,
  ParseError,
};

constexpr std::string_view toString(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidSpace: return "InvalidSpace";
    case ErrorCode::NegativeScale: return "NegativeScale";
    case ErrorCode::NegativeMass: return "NegativeMass";
    case ErrorCode::InfeasibleMass: return "InfeasibleMass";
    case ErrorCode::NotProbability: return "NotProbability";
    case ErrorCode::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorCode::NotInV: return "NotInV";
    case ErrorCode::NonMonotoneLevels: return "NonMonotoneLevels";
    case ErrorCode::InfiniteLevel: return "InfiniteLevel";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::DensityUndefined: return "DensityUndefined";
    case ErrorCode::DeficitMismatch: return "DeficitMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Validation or precondition failure. Internal invariant breaks are
/// reported as std::logic_error instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(toString(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kantgap

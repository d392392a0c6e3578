#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hessdamp {

enum class ErrorCode {
  kNonFiniteInput,
  kDimensionMismatch,
  kUnknownProblem,
  kInfeasibleAlpha,
  kEmptyBetaInterval,
  kOutOfBox,
  kMissingMinimizer,
  kNonFiniteState,
  kDivergence,
  kEmptyTrajectory,
  kNonFiniteIterate,
  kMissingGradientCache,
  kInsufficientData,
  kNonPositiveTime,
  kUnknownPreset,
  kIoError,
  kParseError,
  kInvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kUnknownProblem: return "UnknownProblem";
    case ErrorCode::kInfeasibleAlpha: return "InfeasibleAlpha";
    case ErrorCode::kEmptyBetaInterval: return "EmptyBetaInterval";
    case ErrorCode::kOutOfBox: return "OutOfBox";
    case ErrorCode::kMissingMinimizer: return "MissingMinimizer";
    case ErrorCode::kNonFiniteState: return "NonFiniteState";
    case ErrorCode::kDivergence: return "Divergence";
    case ErrorCode::kEmptyTrajectory: return "EmptyTrajectory";
    case ErrorCode::kNonFiniteIterate: return "NonFiniteIterate";
    case ErrorCode::kMissingGradientCache: return "MissingGradientCache";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kNonPositiveTime: return "NonPositiveTime";
    case ErrorCode::kUnknownPreset: return "UnknownPreset";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace hessdamp

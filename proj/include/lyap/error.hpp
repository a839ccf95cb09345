#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lyap {

enum class ErrorCode {
  NonPositiveTime,
  UnsortedLocations,
  NonPositiveMultiplicity,
  LengthMismatch,
  NoMerge,
  OutOfRange,
  DimensionTooLarge,
  HypothesisNotMet,
  NuTooLarge,
  InvalidContour,
  NonPositiveMoment,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveTime: return "NonPositiveTime";
    case ErrorCode::UnsortedLocations: return "UnsortedLocations";
    case ErrorCode::NonPositiveMultiplicity: return "NonPositiveMultiplicity";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NoMerge: return "NoMerge";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::HypothesisNotMet: return "HypothesisNotMet";
    case ErrorCode::NuTooLarge: return "NuTooLarge";
    case ErrorCode::InvalidContour: return "InvalidContour";
    case ErrorCode::NonPositiveMoment: return "NonPositiveMoment";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Exception type for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return to_string(code_); }

 private:
  ErrorCode code_;
};

}  // namespace lyap

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chs {

enum class ErrorKind {
  DimensionOverflow,
  BadRegisterIndex,
  ShapeMismatch,
  EigsFailed,
  NotPSD,
  NotUnitary,
  NotNormalized,
  EnumerationTooLarge,
  NotCollisionFree,
  PreconditionViolated,
  ParameterError,
  ConfigInvalid,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionOverflow: return "DimensionOverflow";
    case ErrorKind::BadRegisterIndex: return "BadRegisterIndex";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::EigsFailed: return "EigsFailed";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorKind::NotCollisionFree: return "NotCollisionFree";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::ParameterError: return "ParameterError";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so the
/// experiment runner can record it as a failed check.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace chs

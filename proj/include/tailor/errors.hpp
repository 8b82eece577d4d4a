#pragma once

#include <stdexcept>
#include <string>

namespace tailor {

enum class ErrorCode {
  InvalidInput,
  OutOfRange,
  NonUniqueGeodesic,
  RefinementLimit,
  CoefficientMismatch,
  NotACocycle,
  NotASubsemigroup,
  ComplexMismatch,
  UndefinedWeight,
  InvalidTaille,
  InsufficientSamples,
  LevelTooLarge,
  TooManyTuples,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonUniqueGeodesic: return "NonUniqueGeodesic";
    case ErrorCode::RefinementLimit: return "RefinementLimit";
    case ErrorCode::CoefficientMismatch: return "CoefficientMismatch";
    case ErrorCode::NotACocycle: return "NotACocycle";
    case ErrorCode::NotASubsemigroup: return "NotASubsemigroup";
    case ErrorCode::ComplexMismatch: return "ComplexMismatch";
    case ErrorCode::UndefinedWeight: return "UndefinedWeight";
    case ErrorCode::InvalidTaille: return "InvalidTaille";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::LevelTooLarge: return "LevelTooLarge";
    case ErrorCode::TooManyTuples: return "TooManyTuples";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace tailor

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pswave {

/// Every failure the library reports. The CLI maps each one to a distinct exit code.
enum class ErrorCode {
  InvalidParameter,
  DistinctRealRootsRequired,
  NoPositivePair,
  InvalidEpsilon,
  InvalidPlateau,
  BaseCaseFails,
  BoundsViolated,
  GridMismatch,
  GridTooSmall,
  RangeViolation,
  KinkOutsideDomain,
  MuTooLarge,
  PreconditionFailed,
  OrderingViolated,
  MaxIterExceeded,
  DomainTooSmall,
  NonMonotoneFront,
  SingularSystem,
  IoError,
  ConfigError,
  ValidationFailed,
};

inline constexpr std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::DistinctRealRootsRequired: return "DistinctRealRootsRequired";
    case ErrorCode::NoPositivePair: return "NoPositivePair";
    case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
    case ErrorCode::InvalidPlateau: return "InvalidPlateau";
    case ErrorCode::BaseCaseFails: return "BaseCaseFails";
    case ErrorCode::BoundsViolated: return "BoundsViolated";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::KinkOutsideDomain: return "KinkOutsideDomain";
    case ErrorCode::MuTooLarge: return "MuTooLarge";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::OrderingViolated: return "OrderingViolated";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::DomainTooSmall: return "DomainTooSmall";
    case ErrorCode::NonMonotoneFront: return "NonMonotoneFront";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

inline void require(bool cond, ErrorCode code, const std::string& detail) {
  if (!cond) fail(code, detail);
}

}  // namespace pswave

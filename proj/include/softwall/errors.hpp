#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace softwall {

enum class ErrorCode {
  InvalidModel,
  EInBand,
  EOnEigenvalue,
  RangeExceeded,
  SaturationNotFound,
  BoxTooSmall,
  PlanInfeasible,
  TooFewCells,
  NotCoprime,
  ZeroIndex,
  EigensolverFailure,
  Config,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::EInBand: return "EInBand";
    case ErrorCode::EOnEigenvalue: return "EOnEigenvalue";
    case ErrorCode::RangeExceeded: return "RangeExceeded";
    case ErrorCode::SaturationNotFound: return "SaturationNotFound";
    case ErrorCode::BoxTooSmall: return "BoxTooSmall";
    case ErrorCode::PlanInfeasible: return "PlanInfeasible";
    case ErrorCode::TooFewCells: return "TooFewCells";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::ZeroIndex: return "ZeroIndex";
    case ErrorCode::EigensolverFailure: return "EigensolverFailure";
    case ErrorCode::Config: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace softwall

#include "error.hpp"

namespace fuzzyshape {

const char *to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidMembershipFunction: return "InvalidMembershipFunction";
    case ErrorCode::OutOfUniverse: return "OutOfUniverse";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::EmptyFiring: return "EmptyFiring";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::InvalidRuleBase: return "InvalidRuleBase";
    case ErrorCode::InvalidMeasurement: return "InvalidMeasurement";
    case ErrorCode::InvalidRow: return "InvalidRow";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UnknownSystem: return "UnknownSystem";
  }
  return "Unknown";
}

}  // namespace fuzzyshape

#pragma once

#include <stdexcept>
#include <string>

namespace fuzzyshape {

enum class ErrorCode {
  InvalidArgument,
  InvalidMembershipFunction,
  OutOfUniverse,
  UnknownLabel,
  EmptyFiring,
  ZeroMass,
  NonConvergence,
  InvalidRuleBase,
  InvalidMeasurement,
  InvalidRow,
  ParseError,
  ValidationError,
  IoError,
  UnknownSystem,
};

const char *to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message) : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fuzzyshape

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ksector {

enum class ErrorCode {
  EmptySource,
  DimensionMismatch,
  InvalidGeometry,
  InvalidMetric,
  EmptySite,
  SitesOverlap,
  InvalidState,
  IncompatibleStates,
  NotPreFixpoint,
  NotAGradation,
  EmptySectorSlot,
  IncompatibleScenes,
  NotApplicable,
  PreconditionViolated,
  EmptyInput,
  BudgetExceeded,
  ParseError,
  ValidationError,
  SitesOverlapAfterRasterization,
  IoError,
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

}  // namespace ksector

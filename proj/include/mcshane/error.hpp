#pragma once

#include <stdexcept>
#include <string>

namespace mcshane {

enum class ErrorCode {
  InvalidIsometry,
  Domain,
  DegenerateConfiguration,
  NotHyperbolic,
  InvalidHalfPants,
  InvalidParameters,
  InvalidPants,
  ConstructionFailed,
  LookupFailed,
  VertexHit,
  BudgetExceeded,
  NotLassoInducible,
  NotPrimitive,
  DegeneratePosition,
  InvalidConfig,
};

const char* to_string(ErrorCode code);

/// Every failure in the library is reported through this type; callers
/// branch on code() rather than on the message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mcshane

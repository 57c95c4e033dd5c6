#pragma once

#include <stdexcept>
#include <string>

namespace stcut {

enum class ErrorCode {
  kInvalidArgument,
  kZeroCapacity,
  kZeroDemand,
  kTooLarge,
  kDisconnected,
  kEmptySet,
  kNotStSeparating,
  kViolatedProperty,
  kDegenerateMap,
  kIterationLimit,
  kInfeasible,
  kRequiresProductDemand,
  kNumericalFailure,
  kLemmaViolation,
  kCollapsedTerminals,
  kAmplificationExhausted,
  kIsolatedVertex,
  kParseError,
  kMissingTerminals,
  kBadProbability,
  kSizeCeiling,
  kIoError,
};

const char* error_code_name(ErrorCode code) noexcept;

// Every failure surfaced by the library is an Error carrying one of the codes
// above. Parse errors additionally carry the 1-based input line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, int line = 0)
      : std::runtime_error(what), code_(code), line_(line) {}

  ErrorCode code() const noexcept { return code_; }
  int line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  int line_;
};

}  // namespace stcut

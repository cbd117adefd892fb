#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace parshin {

// Machine-readable failure codes. The CLI maps these onto exit codes.
enum class ErrorCode {
  DivisionByZero,
  ZeroElement,
  PrecisionExhausted,
  UnitConstantRequired,
  ExactFormRequired,
  MixedModulus,
  NotAHomomorphism,
  UnsupportedField,
  WildCoefficients,
  UnsupportedPrime,
  AnalyticSplittingUnsupported,
  NotMaximalChain,
  UnsupportedElementForm,
  NotStabilized,
  FaceMapIncompatible,
  DegreeOutOfRange,
  GoldenMismatch,
  InvalidInput,
  ParseError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace parshin

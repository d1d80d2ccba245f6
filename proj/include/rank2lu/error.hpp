#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rank2lu {

enum class ErrorCode {
  NotHermitian,
  ConvergenceFailure,
  SingularInput,
  ShapeMismatch,
  NonFinite,
  InvalidTolerance,
  InvalidShape,
  InvalidDensityMatrix,
  RankNotTwo,
  DegenerateSpectrum,
  InvalidState,
  NotUnitary,
  ClassConditionViolated,
  BlockExtractionFailure,
  WitnessVerificationFailure,
  SingularB,
  OrthogonalityUnsatisfiable,
  NotNormalized,
  GenerationFailure,
  InvalidArgument,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; the code identifies the violated contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rank2lu

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jacobi {

enum class ErrorCode {
  NonPositiveCurvature,
  DegenerateLattice,
  UnknownCurve,
  ChartOverflow,
  FrameDiscontinuity,
  NonIntegralChernNumber,
  WeightOverflow,
  NotEinstein,
  IncompatibleSpin,
  CutoffTooSmall,
  WeightMismatch,
  GramIllConditioned,
  NonConvergence,
  UnstableKernel,
  UnsupportedGenus,
  HypothesisViolation,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class JacobiError : public std::runtime_error {
 public:
  JacobiError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace jacobi

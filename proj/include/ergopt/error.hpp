#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ergopt {

enum class Errc {
  // input validation
  NonSquareMatrix,
  DeadSymbol,
  InvalidArgument,
  ParseError,
  InadmissiblePoint,
  InadmissibleCycle,
  SubshiftMismatch,
  NotRational,
  // budgets
  DepthOverflow,
  BudgetExceeded,
  DepthBudget,
  // computation
  SamplerFailure,
  NoCycle,
  NonConvergence,
  CalibrationViolation,
  ResolutionTooCoarse,
  DeltaTooLarge,
  BranchMissing,
  BoundViolated,
  RootFindingFailure,
  PressureNotZero,
  SeparationTooSmall,
  LockFailed,
  NotExtreme,
};

std::string_view errc_name(Errc code) noexcept;

/// True for errors caused by bad input rather than by a failed computation.
bool is_validation_error(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ergopt

#include "ergopt/error.hpp"

namespace ergopt {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NonSquareMatrix: return "NonSquareMatrix";
    case Errc::DeadSymbol: return "DeadSymbol";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ParseError: return "ParseError";
    case Errc::InadmissiblePoint: return "InadmissiblePoint";
    case Errc::InadmissibleCycle: return "InadmissibleCycle";
    case Errc::SubshiftMismatch: return "SubshiftMismatch";
    case Errc::NotRational: return "NotRational";
    case Errc::DepthOverflow: return "DepthOverflow";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::DepthBudget: return "DepthBudget";
    case Errc::SamplerFailure: return "SamplerFailure";
    case Errc::NoCycle: return "NoCycle";
    case Errc::NonConvergence: return "NonConvergence";
    case Errc::CalibrationViolation: return "CalibrationViolation";
    case Errc::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case Errc::DeltaTooLarge: return "DeltaTooLarge";
    case Errc::BranchMissing: return "BranchMissing";
    case Errc::BoundViolated: return "BoundViolated";
    case Errc::RootFindingFailure: return "RootFindingFailure";
    case Errc::PressureNotZero: return "PressureNotZero";
    case Errc::SeparationTooSmall: return "SeparationTooSmall";
    case Errc::LockFailed: return "LockFailed";
    case Errc::NotExtreme: return "NotExtreme";
  }
  return "Unknown";
}

bool is_validation_error(Errc code) noexcept {
  switch (code) {
    case Errc::NonSquareMatrix:
    case Errc::DeadSymbol:
    case Errc::InvalidArgument:
    case Errc::ParseError:
    case Errc::InadmissiblePoint:
    case Errc::InadmissibleCycle:
    case Errc::SubshiftMismatch:
    case Errc::NotRational:
    case Errc::DepthOverflow:
    case Errc::BudgetExceeded:
    case Errc::DepthBudget:
    case Errc::DeltaTooLarge:
    case Errc::PressureNotZero:
    case Errc::SeparationTooSmall:
      return true;
    default:
      return false;
  }
}

}  // namespace ergopt

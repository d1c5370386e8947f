#include "surfstates/error.hpp"

namespace surfstates {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorKind::ZeroField: return "ZeroField";
    case ErrorKind::CapTooLarge: return "CapTooLarge";
    case ErrorKind::FluxTooLarge: return "FluxTooLarge";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::NoBoundState: return "NoBoundState";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::AboveEssentialFloor: return "AboveEssentialFloor";
    case ErrorKind::HaloTooSmall: return "HaloTooSmall";
    case ErrorKind::FactorizationBreakdown: return "FactorizationBreakdown";
    case ErrorKind::BadParameters: return "BadParameters";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::DegenerateWindow: return "DegenerateWindow";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotAntisymmetric:
    case ErrorKind::ZeroField:
    case ErrorKind::FluxTooLarge:
    case ErrorKind::AboveEssentialFloor:
    case ErrorKind::HaloTooSmall:
    case ErrorKind::BadParameters:
    case ErrorKind::HypothesisViolated:
    case ErrorKind::ConfigInvalid:
    case ErrorKind::InvalidArgument:
      return ErrorCategory::config;
    default:
      return ErrorCategory::numeric;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

NotAntisymmetric::NotAntisymmetric(int row, int col, double asymmetry)
    : Error(ErrorKind::NotAntisymmetric,
            "B(" + std::to_string(row) + "," + std::to_string(col) + ") + B(" + std::to_string(col) +
                "," + std::to_string(row) + ") = " + std::to_string(asymmetry)),
      row_(row),
      col_(col),
      asymmetry_(asymmetry) {}

BudgetExceeded::BudgetExceeded(std::size_t required, std::size_t allowed, const std::string& what)
    : Error(ErrorKind::BudgetExceeded, what + " needs " + std::to_string(required) +
                                           " but the budget allows " + std::to_string(allowed)),
      required_(required),
      allowed_(allowed) {}

}  // namespace surfstates

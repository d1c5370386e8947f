#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace surfstates {

/// Every failure the library reports. The category decides the CLI exit code.
enum class ErrorKind {
  NotAntisymmetric,
  ZeroField,
  CapTooLarge,
  FluxTooLarge,
  SolverFailure,
  NoBoundState,
  BudgetExceeded,
  AboveEssentialFloor,
  HaloTooSmall,
  FactorizationBreakdown,
  BadParameters,
  HypothesisViolated,
  TooFewPoints,
  DegenerateWindow,
  ConfigInvalid,
  InvalidArgument,
};

enum class ErrorCategory { config, numeric };

std::string_view to_string(ErrorKind kind);
ErrorCategory category_of(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_of(kind_); }

 private:
  ErrorKind kind_;
};

class NotAntisymmetric : public Error {
 public:
  NotAntisymmetric(int row, int col, double asymmetry);
  int row() const noexcept { return row_; }
  int col() const noexcept { return col_; }
  double asymmetry() const noexcept { return asymmetry_; }

 private:
  int row_;
  int col_;
  double asymmetry_;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::size_t required, std::size_t allowed, const std::string& what);
  std::size_t required() const noexcept { return required_; }
  std::size_t allowed() const noexcept { return allowed_; }

 private:
  std::size_t required_;
  std::size_t allowed_;
};

}  // namespace surfstates

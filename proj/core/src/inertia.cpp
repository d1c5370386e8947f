#include "surfstates/inertia.hpp"

#include <cmath>

#include "surfstates/error.hpp"

namespace surfstates {

namespace {
constexpr double kTinyPivot = 1e-13;
}

InertiaCounter::InertiaCounter(const SparseHermitian& H) : matrix_(&H), norm_(max_row_sum_norm(H)) {
  if (H.rows() != H.cols()) throw Error(ErrorKind::InvalidArgument, "matrix must be square");
  ldlt_.analyzePattern(H);
}

std::optional<std::int64_t> InertiaCounter::negative_count(double sigma) {
  ldlt_.setShift(-sigma);
  ldlt_.factorize(*matrix_);
  if (ldlt_.info() != Eigen::Success) return std::nullopt;
  const auto& D = ldlt_.vectorD();
  const double floor = kTinyPivot * std::max(norm_, std::abs(sigma));
  std::int64_t negative = 0;
  for (Eigen::Index i = 0; i < D.size(); ++i) {
    const double pivot = std::real(D(i));
    if (!std::isfinite(pivot) || std::abs(pivot) <= floor) return std::nullopt;
    if (pivot < 0.0) ++negative;
  }
  return negative;
}

Eigen::VectorXcd InertiaCounter::solve(const Eigen::VectorXcd& b) const { return ldlt_.solve(b); }

}  // namespace surfstates

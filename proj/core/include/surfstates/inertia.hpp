#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/SparseCholesky>

#include "surfstates/linalg.hpp"

namespace surfstates {

/// Sylvester-inertia counter: number of negative pivots of LDL^* of H - sigma I.
///
/// The symbolic analysis (AMD ordering and elimination tree) is done once in the
/// constructor and reused for every shift.
class InertiaCounter {
 public:
  explicit InertiaCounter(const SparseHermitian& H);

  /// Negative pivot count, or nullopt when a pivot is zero, tiny or non-finite.
  std::optional<std::int64_t> negative_count(double sigma);

  /// Solves (H - sigma I) x = b with the factorization of the last successful shift.
  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const;

  double norm() const { return norm_; }

 private:
  const SparseHermitian* matrix_;
  Eigen::SimplicialLDLT<SparseHermitian, Eigen::Lower> ldlt_;
  double norm_;
};

}  // namespace surfstates

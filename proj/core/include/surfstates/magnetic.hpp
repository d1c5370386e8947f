#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace surfstates {

/// Canonical invariants of a constant antisymmetric field matrix B.
struct MagneticStructure {
  std::vector<double> b;  // nonzero eigenvalue magnitudes, descending
  int m = 0;              // half rank
  int n = 0;              // kernel dimension
  double beta = 0.0;      // sum of b

  int dimension() const { return 2 * m + n; }
  /// b_1 * ... * b_m (1 for m = 0).
  double flux_product() const;

  static MagneticStructure zero_field(int d);
  /// Canonical structure with frequencies `b` plus `n` field-free directions.
  static MagneticStructure from_frequencies(std::vector<double> b, int n);
};

struct LandauLevel {
  double energy;
  std::int64_t multiplicity;
};

struct LandauLadder {
  std::vector<LandauLevel> levels;
  double cap = 0.0;
};

struct CountingJump {
  double energy;
  std::int64_t weight;
};

/// Eigenvalue counting measure of the longitudinal operator below its essential floor.
struct CountingMeasure {
  std::vector<CountingJump> jumps;
  double essential_floor = std::numeric_limits<double>::infinity();

  /// Groups coincident eigenvalues (within `merge_tol`) into weighted jumps.
  static CountingMeasure from_eigenvalues(std::vector<double> eigenvalues, double essential_floor,
                                          double merge_tol = 1e-12);
  /// rho(E): total weight of jumps strictly below E.
  std::int64_t count_below(double E) const;
};

constexpr double kDefaultAsymmetryTolerance = 1e-12;
constexpr std::size_t kDefaultLadderBudget = 2'000'000;

MagneticStructure canonicalize_field(const Eigen::MatrixXd& B,
                                     double tol_rel = kDefaultAsymmetryTolerance);

/// Block-diagonal matrix diag([[0,b1],[-b1,0]], ..., 0_n) realising `ms`.
Eigen::MatrixXd canonical_field_matrix(const MagneticStructure& ms);

/// True when B already has the canonical block layout used by the lattice builders.
bool is_canonical_block_form(const Eigen::MatrixXd& B, double tol = 1e-12);

double landau_merge_tolerance(const MagneticStructure& ms);

LandauLadder landau_ladder(const MagneticStructure& ms, double cap,
                           std::size_t budget = kDefaultLadderBudget);

/// Integrated density of states of the free transverse operator, left-continuous.
double free_ids(const MagneticStructure& ms, double E);

/// omega_d / (2 pi)^d.
double semiclassical_coefficient(int d);

double convolve_with_counting(const MagneticStructure& ms, const CountingMeasure& rho, double E);

/// Leading coefficient of nu(E) ~ coeff * E^{d/2 + theta} when rho(E) ~ C E^theta.
double karamata_coefficient(int d, double theta, double C);

}  // namespace surfstates

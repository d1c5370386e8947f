#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "surfstates/lattice.hpp"
#include "surfstates/linalg.hpp"
#include "surfstates/magnetic.hpp"

namespace surfstates {

constexpr double kFluxLimit = 0.5;
constexpr double kFluxWarning = 0.1;
// Dimension up to which spectra are computed densely instead of by inertia counting.
constexpr std::size_t kDefaultDenseCap = 1000;
// Size limit for the dense eigensolve of a multi-dimensional longitudinal grid.
constexpr std::size_t kLongitudinalDenseCap = 4000;
constexpr std::size_t kDefaultMaxDimension = 200000;

/// Finite-difference magnetic Schrödinger operator on a Dirichlet window.
///
/// Links carry Peierls phases exp(-i h A_j(midpoint)) in the symmetric gauge
/// A_j(x) = -1/2 sum_k B_jk x_k; the diagonal is 2d/h^2 - beta.
struct TransverseOperator {
  LatticeWindow window;
  MagneticStructure field;
  Eigen::MatrixXd B;
  SparseHermitian matrix;
  double max_plaquette_flux = 0.0;
  bool flux_warning = false;
};

double symmetric_gauge_potential(const Eigen::MatrixXd& B, int axis, const std::vector<double>& x);

TransverseOperator build_transverse(const LatticeWindow& window, const Eigen::MatrixXd& B);

struct GroundEnergyOptions {
  std::size_t dense_cap = kDefaultDenseCap;
  double rel_tol = 1e-10;
  int max_iterations = 200;
};

/// Smallest eigenvalue of a Hermitian matrix (dense solve, or inverse iteration
/// followed by inertia bisection for large matrices).
double ground_energy(const SparseHermitian& H, const GroundEnergyOptions& options = {});
double ground_energy(const TransverseOperator& op, const GroundEnergyOptions& options = {});

// ---- longitudinal operator -------------------------------------------------

/// -Laplacian + u on a grid; `confining` selects an infinite essential floor.
struct GridPotentialModel {
  std::function<double(const std::vector<double>&)> u;
  bool confining = false;
  std::string name = "grid";
};

/// Point interaction of strength alpha (one dimension only), discretized as -alpha/h at y = 0.
struct DeltaWellModel {
  double alpha = 0.0;
};

/// Spectrum injected directly, without eigenvectors.
struct ExplicitSpectrumModel {
  std::vector<double> energies;
  double essential_floor = 0.0;
};

using ParallelModel = std::variant<GridPotentialModel, DeltaWellModel, ExplicitSpectrumModel>;

struct ParallelEigenpair {
  double energy = 0.0;
  Eigen::VectorXd psi;  // sum psi^2 h^l = 1; empty for injected spectra
};

struct ParallelSpectrum {
  std::vector<ParallelEigenpair> eigenpairs;
  double essential_floor = 0.0;
  std::string model;
  std::optional<LatticeWindow> grid;
  SparseHermitian grid_operator;  // empty for injected spectra
  bool too_few_states = false;

  std::vector<double> energies() const;
  bool has_vectors() const;
  CountingMeasure counting_measure() const;
  /// Grid quadrature weight h^l (1 without a grid).
  double cell_volume() const;
};

ParallelSpectrum solve_parallel(const ParallelModel& model, const std::optional<LatticeWindow>& grid,
                                int count, std::size_t dense_cap = kLongitudinalDenseCap);

/// Half-width Y with exp(-sqrt|E1| Y) = 1e-6.
double suggested_half_width(double E1);

// ---- assembly ---------------------------------------------------------------

struct LongitudinalMode {
  enum class Kind { full_grid, injected };
  Kind kind = Kind::injected;
  int levels = 1;

  static LongitudinalMode full_grid() { return {Kind::full_grid, 0}; }
  static LongitudinalMode injected(int r) { return {Kind::injected, r}; }
};

/// Disorder sample on the product grid, either separable V = A(x) g(y) or tabulated.
struct PotentialSample {
  Eigen::VectorXd transverse;    // A(p)
  Eigen::VectorXd longitudinal;  // g(q); empty when V does not depend on y
  Eigen::VectorXd product;       // V(p, q) at p * N_par + q; overrides the separable form

  static PotentialSample y_independent(Eigen::VectorXd A);
  static PotentialSample separable(Eigen::VectorXd A, Eigen::VectorXd g);
  static PotentialSample tabulated(Eigen::VectorXd values);
};

struct AssembledOperator {
  SparseHermitian matrix;
  std::size_t transverse_size = 0;
  std::size_t longitudinal_size = 0;
  LongitudinalMode mode;
};

/// Size of the product index set, without building anything.
std::size_t assembled_dimension(const TransverseOperator& op, const ParallelSpectrum& par,
                                const LongitudinalMode& mode);

AssembledOperator assemble(const TransverseOperator& op, const ParallelSpectrum& par,
                           const LongitudinalMode& mode, const PotentialSample* V = nullptr,
                           std::size_t max_dim = kDefaultMaxDimension);

/// Matrix elements G_jk = sum_q g(q) psi_j(q) psi_k(q) h^l (identity when g is empty).
Eigen::MatrixXd longitudinal_couplings(const ParallelSpectrum& par, int levels, const Eigen::VectorXd& g);

// ---- magnetic translations -------------------------------------------------

struct MagneticTranslation {
  std::vector<std::int64_t> shift;
  LatticeWindow target;
  Eigen::VectorXcd phases;  // on the target grid
};

/// Phase field p(x') = exp(-(i/2) sum xi_j B_jk x'_k) on the translated window, with
/// P H(target) P^* = H(original) for P = diag(p).
MagneticTranslation magnetic_translate(const TransverseOperator& op, const std::vector<std::int64_t>& xi);

SparseHermitian conjugate_by_phases(const SparseHermitian& H, const Eigen::VectorXcd& phases);

}  // namespace surfstates

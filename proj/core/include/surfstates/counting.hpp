#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "surfstates/disorder.hpp"
#include "surfstates/hamiltonians.hpp"
#include "surfstates/inertia.hpp"
#include "surfstates/linalg.hpp"

namespace surfstates {

struct CountingOptions {
  std::size_t dense_cap = kDefaultDenseCap;
  double tie_rel = 1e-10;
};

enum class CountPath { dense, inertia };

struct CountResult {
  std::int64_t count = 0;
  CountPath path = CountPath::dense;
  /// 0 when the first factorization succeeded, -1 / +1 when E was nudged down / up.
  int perturbation = 0;
};

/// Number of eigenvalues strictly below E - tie_eps, tie_eps = tie_rel * ||H||.
CountResult count_below(const SparseHermitian& H, double E, const CountingOptions& options = {});

/// Counting function of one matrix, reusing the dense spectrum or the symbolic factorization.
class SpectrumCounter {
 public:
  SpectrumCounter(SparseHermitian H, const CountingOptions& options = {});

  CountResult count(double E);
  std::int64_t operator()(double E) { return count(E).count; }

  CountPath path() const { return path_; }
  double tie_eps() const { return tie_eps_; }
  double norm() const { return norm_; }
  Eigen::Index dimension() const { return matrix_.rows(); }

  /// k-th smallest eigenvalue (0-based) by bisection on [lo, hi] to absolute tolerance `tol`.
  double eigenvalue(std::int64_t k, double lo, double hi, double tol);

 private:
  SparseHermitian matrix_;
  CountingOptions options_;
  CountPath path_;
  double norm_;
  double tie_eps_;
  Eigen::VectorXd eigenvalues_;
  std::unique_ptr<InertiaCounter> inertia_;
};

/// Run of adjacent energy bins holding a dense share of eigenvalues.
struct SpectralCluster {
  double lower = 0.0;
  double upper = 0.0;
  double center = 0.0;            // median eigenvalue of the run
  std::int64_t count_before = 0;  // eigenvalues below `lower`
  std::int64_t size = 0;
};

/// Bins [grid_k, grid_{k+1}) whose eigenvalue count is at least `density_fraction` of the
/// largest bin count are dense; adjacent dense bins are merged into one cluster.
std::vector<SpectralCluster> detect_clusters(SpectrumCounter& counter, const std::vector<double>& grid,
                                             double density_fraction = 0.25, double center_tol = 1e-6);

// ---- curves ------------------------------------------------------------------

struct CurveMeta {
  double L = 0.0;
  double h = 0.0;
  std::uint64_t seed0 = 0;
  std::size_t realizations = 0;
  std::string descriptor;
};

struct EmpiricalCurve {
  std::vector<double> energies;
  std::vector<double> values;
  std::vector<double> std_err;
  double normalization = 1.0;
  CurveMeta meta;

  bool is_monotone() const;
  /// Linear lookup of the value at a grid energy (throws when absent).
  double at(double E) const;
};

struct EnsembleStats {
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<double> min;
  std::vector<double> max;
  std::size_t n = 0;
};

struct EnsembleResult {
  EmpiricalCurve curve;
  EnsembleStats stats;
  std::vector<std::vector<std::int64_t>> counts;  // [realization][energy]
};

/// Ensemble statistics of per-realization counts normalized by `volume`.
EnsembleResult summarize_counts(std::vector<std::vector<std::int64_t>> counts, const std::vector<double>& energies,
                                double volume, CurveMeta meta);

// ---- experiments ---------------------------------------------------------------

struct DisorderModel {
  SingleSiteProfile profile;
  CouplingLaw law;
  int halo = -1;  // negative: chosen from the tail bound
  double tail_tol_rel = 1e-6;
};

struct SurfaceModel {
  Eigen::MatrixXd B;
  ParallelSpectrum parallel;
  LongitudinalMode mode;
  std::optional<DisorderModel> disorder;

  std::string describe() const;
};

/// Realization seed derived from the run seed and the realization index.
std::uint64_t realization_seed(std::uint64_t seed0, std::size_t r);

/// Builds finite-volume operators for one window of a surface model.
class SurfaceExperiment {
 public:
  SurfaceExperiment(SurfaceModel model, LatticeWindow window, std::size_t max_dim = kDefaultMaxDimension);

  const SurfaceModel& model() const { return model_; }
  const LatticeWindow& window() const { return window_; }
  const TransverseOperator& transverse() const { return transverse_; }
  int halo() const { return halo_; }
  /// Sup bound M of the potential (0 without disorder).
  double sup_potential() const { return M_; }
  double essential_floor() const { return model_.parallel.essential_floor; }

  std::optional<AlloyPotential> potential(std::uint64_t seed) const;
  AssembledOperator free_operator() const;
  AssembledOperator disordered_operator(std::uint64_t seed) const;
  AssembledOperator operator_for(const AlloyPotential& V) const;
  /// W_j on the transverse window for the realization with this seed.
  Eigen::VectorXd reduced_potential(std::uint64_t seed, int j) const;
  /// H_perp + scale * W_j.
  SparseHermitian reduced_operator(std::uint64_t seed, int j, double scale) const;

 private:
  SurfaceModel model_;
  LatticeWindow window_;
  std::size_t max_dim_;
  TransverseOperator transverse_;
  int halo_ = 0;
  double M_ = 0.0;
};

struct EnsembleConfig {
  std::vector<double> energies;
  std::size_t realizations = 1;
  std::uint64_t seed = 0;
  CountingOptions counting;
  unsigned threads = 1;
};

/// Calls fn(i) for i in [0, n) on up to `threads` workers; rethrows the lowest-index failure.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Per-realization counts of `build(seed)` at each energy.
std::vector<std::vector<std::int64_t>> ensemble_counts(const std::function<SparseHermitian(std::uint64_t)>& build,
                                                       const EnsembleConfig& config, bool seed_dependent = true);

EnsembleResult idss_estimate(const SurfaceExperiment& experiment, const EnsembleConfig& config);

/// Finite-volume estimate of the IDS of H_perp + scale * W_j, on the same realizations.
EnsembleResult reduced_ids_estimate(const SurfaceExperiment& experiment, const EnsembleConfig& config, int j,
                                    double scale);

struct SuperadditivityRow {
  std::size_t realization;
  double energy;
  std::int64_t whole;
  std::int64_t first;
  std::int64_t second;
};

struct SuperadditivityReport {
  std::vector<SuperadditivityRow> rows;
  std::size_t violations = 0;
};

/// Splits the cube into two halves along `axis` and checks N(O) >= N(O1) + N(O2).
SuperadditivityReport superadditivity_check(const SurfaceModel& model, const LatticeWindow& window,
                                            const EnsembleConfig& config, int axis = 0);

struct ConvergenceRow {
  double L;
  std::vector<double> values;
  std::vector<double> std_err;
  std::vector<double> difference;  // |nu(L) - nu(previous L)|, empty for the first row
};

std::vector<ConvergenceRow> convergence_study(const SurfaceModel& model, const std::vector<double>& L_ladder,
                                              double h, const EnsembleConfig& config);

}  // namespace surfstates

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "surfstates/counting.hpp"
#include "surfstates/magnetic.hpp"

namespace surfstates {

/// Open interval (lo, hi); hi may be +infinity.
struct Interval {
  double lo;
  double hi;

  bool contains(double x) const { return x > lo && x < hi; }
  /// Midpoint, or lo + 1 for an unbounded interval.
  double midpoint() const;
  std::string describe() const;
};

struct SandwichTolerance {
  double stat_tol = 2.0;         // multiples of the combined standard error
  double finite_size_tol = 0.0;  // absolute allowance for closed-form bounds at finite L
};

struct SandwichRow {
  double energy = 0.0;  // E for the global sandwich, lambda for the edge sandwiches
  double lower = 0.0;
  double target = 0.0;
  double upper = 0.0;
  double target_se = 0.0;
  double lower_slack = 0.0;
  double upper_slack = 0.0;
  bool pass = true;
};

struct SandwichReport {
  std::string kind;
  std::vector<SandwichRow> rows;
  std::vector<std::pair<std::string, double>> parameters;

  std::size_t violations() const;
  bool passed() const { return violations() == 0; }
  std::string summary() const;
};

/// (N0 * drho)(E - M) <= nu(E) <= (N0 * drho)(E) on the curve grid.
SandwichReport global_sandwich(const EmpiricalCurve& nu, const MagneticStructure& ms, const CountingMeasure& rho,
                               double M, const SandwichTolerance& tol = {});

// ---- ground edge ---------------------------------------------------------------

struct GroundEdgeParams {
  double M;
  double E1;
  double E2;
  double lambda_star;
  double delta;
  Interval delta_interval;
};

/// Admissible delta interval (M / (M + E2 - E1 - lambda_star), 1); throws BadParameters for lambda_star.
Interval ground_edge_delta_interval(double M, double E1, double E2, double lambda_star);

/// Validates (lambda_star, delta), filling in midpoints when absent.
GroundEdgeParams validate_ground_edge(double M, double E1, double E2, std::optional<double> lambda_star = {},
                                      std::optional<double> delta = {});

/// N_W(lambda) <= nu(E1 + lambda) <= N_{(1-delta)W}(lambda) for lambda in (0, lambda_star].
/// `nu` is sampled at E1 + lambda_i, the reduced curves at lambda_i (same order).
SandwichReport ground_edge_sandwich(const EmpiricalCurve& nu, const EmpiricalCurve& reduced,
                                   const EmpiricalCurve& reduced_scaled, const GroundEdgeParams& params,
                                   const SandwichTolerance& tol = {});

// ---- internal edge --------------------------------------------------------------

struct InternalEdgeParams {
  int j;
  double E_prev;
  double E_j;
  double E_next;  // next level, or the essential floor when E_j is the last one
  double M;
  double delta_minus;
  double lambda_star;
  double delta_plus;
  Interval delta_minus_interval;
  Interval lambda_interval;
  Interval delta_plus_interval;
};

/// Checks the gap hypotheses (HypothesisViolated) and the parameter intervals (BadParameters).
InternalEdgeParams validate_internal_edge(const MagneticStructure& ms, const std::vector<double>& levels,
                                          double essential_floor, int j, double M,
                                          std::optional<double> delta_minus = {},
                                          std::optional<double> lambda_star = {},
                                          std::optional<double> delta_plus = {});

/// Per-realization nu(E_j + lambda) - nu(E_j): `at_edge` holds one energy (E_j), `above` the shifted grid.
EmpiricalCurve difference_curve(const EnsembleResult& above, const EnsembleResult& at_edge,
                                const std::vector<double>& lambdas);

SandwichReport internal_edge_sandwich(const EmpiricalCurve& difference, const EmpiricalCurve& reduced_plus,
                                      const EmpiricalCurve& reduced_minus, const InternalEdgeParams& params,
                                      const SandwichTolerance& tol = {});

// ---- exact integer checks ---------------------------------------------------------

struct IntegerViolation {
  std::size_t realization;
  double energy;
  std::int64_t lhs;
  std::int64_t rhs;
};

struct IntegerCheckReport {
  std::string kind;
  std::size_t checks = 0;
  std::vector<IntegerViolation> violations;

  bool passed() const { return violations.empty(); }
};

/// count(H0; E - M) <= count(H; E) <= count(H0; E) per realization and energy.
IntegerCheckReport finite_volume_sandwich_check(const EnsembleResult& free_shifted, const EnsembleResult& disordered,
                                                const EnsembleResult& free_plain);

/// count(H; E1 + lambda) >= count(H_perp + W_1; lambda) on matched realizations.
IntegerCheckReport projection_bound_check(const EnsembleResult& surface, const EnsembleResult& reduced);

/// lower <= middle <= upper entrywise on matched realizations (operator monotonicity).
IntegerCheckReport ordering_check(const EnsembleResult& lower, const EnsembleResult& middle,
                                  const EnsembleResult& upper);

// ---- plateau ---------------------------------------------------------------------

struct PlateauReport {
  int j = 0;
  double M = 0.0;
  double expected = 0.0;
  double value_left = 0.0;   // mean nu at E_j - M
  double value_right = 0.0;  // mean nu at E_j (left limit)
  double relative_error = 0.0;
  std::size_t realizations = 0;
  std::size_t realizations_with_eigenvalues = 0;
  bool constant = false;
  bool value_ok = false;

  bool passed() const { return constant && value_ok; }
};

/// Expected plateau (j - 1) b_1 ... b_m / (2 pi)^m.
double plateau_value(const MagneticStructure& ms, int j);

/// `edges` holds per-realization counts at the two energies {E_j - M, E_j}.
PlateauReport plateau_check(const EnsembleResult& edges, int j, double M, const MagneticStructure& ms,
                            double rel_tol = 0.1);

// ---- Lifshits exponents ---------------------------------------------------------------

enum class LifshitsAxis { log_lambda, loglog_lambda };

struct LifshitsFit {
  LifshitsAxis axis = LifshitsAxis::log_lambda;
  std::vector<double> lambda;
  std::vector<double> abscissa;   // ln lambda or ln|ln lambda|
  std::vector<double> transformed;  // ln|ln y|, NaN where masked
  std::vector<bool> used;
  std::vector<bool> masked;  // y outside (0, 1)
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double ci_half_width = 0.0;
  double confidence = 0.95;
  std::size_t n_used = 0;
  bool empirical = false;  // set for fits of finite-volume curves; not expected to be asymptotic
};

LifshitsFit fit_lifshits(const std::vector<double>& lambda, const std::vector<double>& y, LifshitsAxis axis,
                         double lambda_min, double lambda_max, double confidence = 0.95);

namespace lifshits_targets {
// Magnetic case (d = 2, n = 0), reduced potential decaying like (1 + |x|)^{-kappa}; ln(lambda) axis.
double magnetic_power(double kappa);
// Magnetic case, w_j ~ exp(-|x|^beta) with beta in (0, 2]; ln|ln lambda| axis.
double magnetic_gaussian(double beta);
// Magnetic case, w_j between an indicator and a Gaussian; ln|ln lambda| axis.
double magnetic_compact();
// Zero field, w_1 ~ (1 + |x|)^{-kappa} with kappa in (d, d + 2); ln(lambda) axis.
double nonmagnetic_power(int d, double kappa);
// Zero field, w_1 between an indicator and (1 + |x|)^{-d-2}; ln(lambda) axis.
double nonmagnetic_short_range(int d);
}  // namespace lifshits_targets

}  // namespace surfstates

#include "surfstates/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "surfstates/error.hpp"

namespace surfstates {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_same_grid(const EmpiricalCurve& a, const EmpiricalCurve& b, const char* what) {
  if (a.values.size() != b.values.size()) {
    throw Error(ErrorKind::InvalidArgument, std::string("curve grids differ in length: ") + what);
  }
}

double combined(double a, double b) { return std::sqrt(a * a + b * b); }

SandwichRow make_row(double energy, double lower, double lower_se, double target, double target_se, double upper,
                     double upper_se, const SandwichTolerance& tol) {
  SandwichRow row;
  row.energy = energy;
  row.lower = lower;
  row.target = target;
  row.upper = upper;
  row.target_se = target_se;
  row.lower_slack = tol.stat_tol * combined(target_se, lower_se) + tol.finite_size_tol;
  row.upper_slack = tol.stat_tol * combined(target_se, upper_se) + tol.finite_size_tol;
  row.pass = lower - row.lower_slack <= target && target <= upper + row.upper_slack;
  return row;
}

}  // namespace

double Interval::midpoint() const { return std::isfinite(hi) ? 0.5 * (lo + hi) : lo + 1.0; }

std::string Interval::describe() const {
  std::ostringstream out;
  out.precision(12);
  out << '(' << lo << ", ";
  if (std::isfinite(hi)) {
    out << hi;
  } else {
    out << "inf";
  }
  out << ')';
  return out.str();
}

std::size_t SandwichReport::violations() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.pass; }));
}

std::string SandwichReport::summary() const {
  std::ostringstream out;
  out << kind << ": " << rows.size() << " points, " << violations() << " violations";
  for (const auto& [name, value] : parameters) out << ", " << name << '=' << value;
  return out.str();
}

SandwichReport global_sandwich(const EmpiricalCurve& nu, const MagneticStructure& ms, const CountingMeasure& rho,
                               double M, const SandwichTolerance& tol) {
  if (M < 0.0) throw Error(ErrorKind::BadParameters, "M must be non-negative");
  SandwichReport report;
  report.kind = "global";
  report.parameters = {{"M", M}, {"stat_tol", tol.stat_tol}, {"finite_size_tol", tol.finite_size_tol}};
  for (std::size_t i = 0; i < nu.energies.size(); ++i) {
    const double E = nu.energies[i];
    const double lower = convolve_with_counting(ms, rho, E - M);
    const double upper = convolve_with_counting(ms, rho, E);
    report.rows.push_back(make_row(E, lower, 0.0, nu.values[i], nu.std_err[i], upper, 0.0, tol));
  }
  return report;
}

// ---- ground edge -----------------------------------------------------------------

Interval ground_edge_delta_interval(double M, double E1, double E2, double lambda_star) {
  const double gap = E2 - E1;
  if (!(gap > 0.0)) throw Error(ErrorKind::HypothesisViolated, "E2 must exceed E1");
  if (!(lambda_star > 0.0 && lambda_star < gap)) {
    std::ostringstream msg;
    msg << "lambda_star = " << lambda_star << " must lie in " << Interval{0.0, gap}.describe();
    throw Error(ErrorKind::BadParameters, msg.str());
  }
  return {M / (M + gap - lambda_star), 1.0};
}

GroundEdgeParams validate_ground_edge(double M, double E1, double E2, std::optional<double> lambda_star,
                                      std::optional<double> delta) {
  if (M < 0.0) throw Error(ErrorKind::BadParameters, "M must be non-negative");
  GroundEdgeParams p{M, E1, E2, 0.0, 0.0, {0.0, 0.0}};
  p.lambda_star = lambda_star.value_or(0.5 * (E2 - E1));
  p.delta_interval = ground_edge_delta_interval(M, E1, E2, p.lambda_star);
  p.delta = delta.value_or(p.delta_interval.midpoint());
  if (!p.delta_interval.contains(p.delta)) {
    std::ostringstream msg;
    msg << "delta = " << p.delta << " must lie in " << p.delta_interval.describe();
    throw Error(ErrorKind::BadParameters, msg.str());
  }
  return p;
}

SandwichReport ground_edge_sandwich(const EmpiricalCurve& nu, const EmpiricalCurve& reduced,
                                   const EmpiricalCurve& reduced_scaled, const GroundEdgeParams& params,
                                   const SandwichTolerance& tol) {
  check_same_grid(nu, reduced, "nu vs N_W");
  check_same_grid(nu, reduced_scaled, "nu vs N_(1-delta)W");
  SandwichReport report;
  report.kind = "ground-edge";
  report.parameters = {{"M", params.M},           {"E1", params.E1},       {"E2", params.E2},
                       {"lambda_star", params.lambda_star}, {"delta", params.delta},
                       {"delta_lo", params.delta_interval.lo}, {"stat_tol", tol.stat_tol}};
  for (std::size_t i = 0; i < reduced.energies.size(); ++i) {
    const double lambda = reduced.energies[i];
    if (!(lambda > 0.0 && lambda <= params.lambda_star)) {
      throw Error(ErrorKind::BadParameters, "lambda grid must lie in (0, lambda_star]");
    }
    report.rows.push_back(make_row(lambda, reduced.values[i], reduced.std_err[i], nu.values[i], nu.std_err[i],
                                   reduced_scaled.values[i], reduced_scaled.std_err[i], tol));
  }
  return report;
}

// ---- internal edge -------------------------------------------------------------------

InternalEdgeParams validate_internal_edge(const MagneticStructure& ms, const std::vector<double>& levels,
                                          double essential_floor, int j, double M,
                                          std::optional<double> delta_minus, std::optional<double> lambda_star,
                                          std::optional<double> delta_plus) {
  if (j < 2 || j > static_cast<int>(levels.size())) {
    throw Error(ErrorKind::BadParameters, "internal edges need 2 <= j <= number of levels");
  }
  if (M < 0.0) throw Error(ErrorKind::BadParameters, "M must be non-negative");
  if (ms.m < 1 || ms.n != 0) throw Error(ErrorKind::HypothesisViolated, "internal edges need n = 0 and m >= 1");
  const double Lambda1 = 2.0 * ms.b.back();
  if (!(levels[0] + Lambda1 > essential_floor)) {
    std::ostringstream msg;
    msg << "E1 + Lambda_1 = " << levels[0] + Lambda1 << " must exceed the essential floor " << essential_floor;
    throw Error(ErrorKind::HypothesisViolated, msg.str());
  }
  InternalEdgeParams p{};
  p.j = j;
  p.M = M;
  p.E_prev = levels[j - 2];
  p.E_j = levels[j - 1];
  p.E_next = j < static_cast<int>(levels.size()) ? levels[j] : essential_floor;
  if (!(p.E_prev < p.E_j && p.E_j < p.E_next)) {
    throw Error(ErrorKind::HypothesisViolated, "levels must satisfy E_{j-1} < E_j < E_{j+1}");
  }
  if (!(M < p.E_j - p.E_prev)) {
    std::ostringstream msg;
    msg << "M = " << M << " must be below E_j - E_{j-1} = " << p.E_j - p.E_prev;
    throw Error(ErrorKind::HypothesisViolated, msg.str());
  }

  p.delta_minus_interval = {M / (p.E_j - p.E_prev - M), kInf};
  p.delta_minus = delta_minus.value_or(p.delta_minus_interval.midpoint());
  if (!p.delta_minus_interval.contains(p.delta_minus)) {
    std::ostringstream msg;
    msg << "delta_minus = " << p.delta_minus << " must lie in " << p.delta_minus_interval.describe();
    throw Error(ErrorKind::BadParameters, msg.str());
  }
  p.lambda_interval = {0.0, std::min(p.E_next - p.E_j, (1.0 + 1.0 / p.delta_minus) * M)};
  p.lambda_star = lambda_star.value_or(p.lambda_interval.midpoint());
  if (!p.lambda_interval.contains(p.lambda_star)) {
    std::ostringstream msg;
    msg << "lambda_star = " << p.lambda_star << " must lie in " << p.lambda_interval.describe();
    throw Error(ErrorKind::BadParameters, msg.str());
  }
  p.delta_plus_interval = {M / (M + p.E_next - p.E_j - p.lambda_star), 1.0};
  p.delta_plus = delta_plus.value_or(p.delta_plus_interval.midpoint());
  if (!p.delta_plus_interval.contains(p.delta_plus)) {
    std::ostringstream msg;
    msg << "delta_plus = " << p.delta_plus << " must lie in " << p.delta_plus_interval.describe();
    throw Error(ErrorKind::BadParameters, msg.str());
  }
  return p;
}

EmpiricalCurve difference_curve(const EnsembleResult& above, const EnsembleResult& at_edge,
                                const std::vector<double>& lambdas) {
  if (above.counts.size() != at_edge.counts.size()) {
    throw Error(ErrorKind::InvalidArgument, "difference curve needs matched realizations");
  }
  if (lambdas.size() != above.curve.energies.size()) {
    throw Error(ErrorKind::InvalidArgument, "lambda grid does not match the shifted energy grid");
  }
  std::vector<std::vector<std::int64_t>> diff(above.counts.size());
  for (std::size_t r = 0; r < diff.size(); ++r) {
    for (std::size_t i = 0; i < lambdas.size(); ++i) diff[r].push_back(above.counts[r][i] - at_edge.counts[r][0]);
  }
  CurveMeta meta = above.curve.meta;
  meta.descriptor = "difference;" + meta.descriptor;
  return summarize_counts(std::move(diff), lambdas, above.curve.normalization, std::move(meta)).curve;
}

SandwichReport internal_edge_sandwich(const EmpiricalCurve& difference, const EmpiricalCurve& reduced_plus,
                                      const EmpiricalCurve& reduced_minus, const InternalEdgeParams& params,
                                      const SandwichTolerance& tol) {
  check_same_grid(difference, reduced_plus, "difference vs N_(1+delta-)W");
  check_same_grid(difference, reduced_minus, "difference vs N_(1-delta+)W");
  SandwichReport report;
  report.kind = "internal-edge";
  report.parameters = {{"j", static_cast<double>(params.j)},
                       {"M", params.M},
                       {"delta_minus", params.delta_minus},
                       {"lambda_star", params.lambda_star},
                       {"delta_plus", params.delta_plus},
                       {"stat_tol", tol.stat_tol}};
  for (std::size_t i = 0; i < difference.energies.size(); ++i) {
    const double lambda = difference.energies[i];
    if (!(lambda > 0.0 && lambda <= params.lambda_star)) {
      throw Error(ErrorKind::BadParameters, "lambda grid must lie in (0, lambda_star]");
    }
    report.rows.push_back(make_row(lambda, reduced_plus.values[i], reduced_plus.std_err[i], difference.values[i],
                                   difference.std_err[i], reduced_minus.values[i], reduced_minus.std_err[i], tol));
  }
  return report;
}

// ---- integer checks -----------------------------------------------------------------

namespace {

void check_matched(const EnsembleResult& a, const EnsembleResult& b) {
  if (a.counts.size() != b.counts.size()) throw Error(ErrorKind::InvalidArgument, "realization counts differ");
  for (std::size_t r = 0; r < a.counts.size(); ++r) {
    if (a.counts[r].size() != b.counts[r].size()) throw Error(ErrorKind::InvalidArgument, "energy grids differ");
  }
}

// Records lhs <= rhs for every entry.
void compare(IntegerCheckReport& report, const EnsembleResult& lhs, const EnsembleResult& rhs) {
  check_matched(lhs, rhs);
  for (std::size_t r = 0; r < lhs.counts.size(); ++r) {
    for (std::size_t e = 0; e < lhs.counts[r].size(); ++e) {
      ++report.checks;
      if (lhs.counts[r][e] > rhs.counts[r][e]) {
        report.violations.push_back({r, rhs.curve.energies[e], lhs.counts[r][e], rhs.counts[r][e]});
      }
    }
  }
}

}  // namespace

IntegerCheckReport finite_volume_sandwich_check(const EnsembleResult& free_shifted, const EnsembleResult& disordered,
                                                const EnsembleResult& free_plain) {
  IntegerCheckReport report;
  report.kind = "finite-volume-sandwich";
  compare(report, free_shifted, disordered);
  compare(report, disordered, free_plain);
  return report;
}

IntegerCheckReport projection_bound_check(const EnsembleResult& surface, const EnsembleResult& reduced) {
  IntegerCheckReport report;
  report.kind = "projection-bound";
  compare(report, reduced, surface);
  return report;
}

IntegerCheckReport ordering_check(const EnsembleResult& lower, const EnsembleResult& middle,
                                  const EnsembleResult& upper) {
  IntegerCheckReport report;
  report.kind = "ordering";
  compare(report, lower, middle);
  compare(report, middle, upper);
  return report;
}

// ---- plateau --------------------------------------------------------------------------

double plateau_value(const MagneticStructure& ms, int j) {
  return (j - 1) * ms.flux_product() / std::pow(2.0 * std::numbers::pi, ms.m);
}

PlateauReport plateau_check(const EnsembleResult& edges, int j, double M, const MagneticStructure& ms,
                            double rel_tol) {
  if (edges.curve.energies.size() != 2) {
    throw Error(ErrorKind::InvalidArgument, "plateau check needs counts at exactly {E_j - M, E_j}");
  }
  PlateauReport report;
  report.j = j;
  report.M = M;
  report.expected = plateau_value(ms, j);
  report.realizations = edges.counts.size();
  for (const auto& row : edges.counts) {
    if (row[1] != row[0]) ++report.realizations_with_eigenvalues;
  }
  report.constant = report.realizations_with_eigenvalues == 0;
  report.value_left = edges.curve.values[0];
  report.value_right = edges.curve.values[1];
  if (report.expected > 0.0) {
    report.relative_error = std::max(std::abs(report.value_left - report.expected),
                                     std::abs(report.value_right - report.expected)) /
                            report.expected;
    report.value_ok = report.relative_error <= rel_tol;
  } else {
    report.relative_error = std::max(std::abs(report.value_left), std::abs(report.value_right));
    report.value_ok = report.relative_error == 0.0;
  }
  return report;
}

// ---- Lifshits --------------------------------------------------------------------------

LifshitsFit fit_lifshits(const std::vector<double>& lambda, const std::vector<double>& y, LifshitsAxis axis,
                         double lambda_min, double lambda_max, double confidence) {
  if (lambda.size() != y.size()) throw Error(ErrorKind::InvalidArgument, "lambda and y differ in length");
  if (!(lambda_min > 0.0 && lambda_min < lambda_max)) {
    throw Error(ErrorKind::BadParameters, "fit window must satisfy 0 < lambda_min < lambda_max");
  }
  if (axis == LifshitsAxis::loglog_lambda && !(lambda_max < 1.0)) {
    throw Error(ErrorKind::BadParameters, "the ln|ln lambda| axis needs lambda_max < 1");
  }
  LifshitsFit fit;
  fit.axis = axis;
  fit.confidence = confidence;
  fit.lambda = lambda;
  const std::size_t n = lambda.size();
  fit.abscissa.assign(n, std::numeric_limits<double>::quiet_NaN());
  fit.transformed.assign(n, std::numeric_limits<double>::quiet_NaN());
  fit.used.assign(n, false);
  fit.masked.assign(n, false);

  std::size_t in_window = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double l = lambda[i];
    if (!(l > 0.0)) continue;
    fit.abscissa[i] = axis == LifshitsAxis::log_lambda ? std::log(l) : std::log(std::abs(std::log(l)));
    if (!(y[i] > 0.0 && y[i] < 1.0)) {
      fit.masked[i] = true;
    } else {
      fit.transformed[i] = std::log(std::abs(std::log(y[i])));
    }
    if (l < lambda_min || l > lambda_max) continue;
    ++in_window;
    fit.used[i] = !fit.masked[i];
  }

  std::vector<double> xs, ts;
  for (std::size_t i = 0; i < n; ++i) {
    if (fit.used[i]) {
      xs.push_back(fit.abscissa[i]);
      ts.push_back(fit.transformed[i]);
    }
  }
  fit.n_used = xs.size();
  if (in_window == 0 || xs.empty()) throw Error(ErrorKind::DegenerateWindow, "no usable point in the fit window");
  if (xs.size() < 5) {
    throw Error(ErrorKind::TooFewPoints, std::to_string(xs.size()) + " usable points, at least 5 are needed");
  }

  const double k = static_cast<double>(xs.size());
  double mx = 0.0, mt = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    mt += ts[i];
  }
  mx /= k;
  mt /= k;
  double sxx = 0.0, sxt = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxt += (xs[i] - mx) * (ts[i] - mt);
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::DegenerateWindow, "abscissa values coincide");
  fit.slope = sxt / sxx;
  fit.intercept = mt - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ts[i] - (fit.intercept + fit.slope * xs[i]);
    rss += r * r;
  }
  const double dof = k - 2.0;
  fit.slope_stderr = std::sqrt(rss / dof / sxx);
  const boost::math::students_t dist(dof);
  fit.ci_half_width = boost::math::quantile(dist, 0.5 + 0.5 * confidence) * fit.slope_stderr;
  return fit;
}

namespace lifshits_targets {
double magnetic_power(double kappa) { return -2.0 / (kappa - 2.0); }
double magnetic_gaussian(double beta) { return 1.0 + 2.0 / beta; }
double magnetic_compact() { return 2.0; }
double nonmagnetic_power(int d, double kappa) { return -d / (kappa - d); }
double nonmagnetic_short_range(int d) { return -0.5 * d; }
}  // namespace lifshits_targets

}  // namespace surfstates

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "surfstates/analysis.hpp"
#include "surfstates/counting.hpp"
#include "surfstates/error.hpp"
#include "surfstates/magnetic.hpp"

using namespace surfstates;

namespace {

EmpiricalCurve curve(std::vector<double> energies, std::vector<double> values, double se = 0.0) {
  EmpiricalCurve c;
  c.energies = std::move(energies);
  c.values = std::move(values);
  c.std_err.assign(c.values.size(), se);
  return c;
}

EnsembleResult ensemble(std::vector<double> energies, std::vector<std::vector<std::int64_t>> counts) {
  return summarize_counts(std::move(counts), energies, 1.0, {});
}

std::vector<double> geometric(double lo, double hi, int n) {
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(lo * std::pow(hi / lo, k / (n - 1.0)));
  return out;
}

}  // namespace

TEST(Interval, OpenBoundaries) {
  const Interval I{0.2, 1.0};
  EXPECT_FALSE(I.contains(0.2));
  EXPECT_FALSE(I.contains(1.0));
  EXPECT_TRUE(I.contains(0.5));
  EXPECT_DOUBLE_EQ(I.midpoint(), 0.6);
  EXPECT_DOUBLE_EQ((Interval{0.25, std::numeric_limits<double>::infinity()}).midpoint(), 1.25);
}

TEST(GroundEdge, DeltaInterval) {
  const auto I = ground_edge_delta_interval(0.2, -1.0, 0.0, 0.5);
  EXPECT_NEAR(I.lo, 0.2 / 0.7, 1e-15);
  EXPECT_EQ(I.hi, 1.0);
}

TEST(GroundEdge, ValidatorRejectsBoundaries) {
  const auto I = ground_edge_delta_interval(0.2, -1.0, 0.0, 0.5);
  EXPECT_THROW(validate_ground_edge(0.2, -1.0, 0.0, 0.5, I.lo), Error);
  EXPECT_THROW(validate_ground_edge(0.2, -1.0, 0.0, 0.5, 1.0), Error);
  EXPECT_THROW(validate_ground_edge(0.2, -1.0, 0.0, 1.0, 0.9), Error);
  EXPECT_THROW(validate_ground_edge(0.2, -1.0, 0.0, 0.0, 0.9), Error);
  const auto p = validate_ground_edge(0.2, -1.0, 0.0, 0.5, 0.5);
  EXPECT_EQ(p.delta, 0.5);
  const auto d = validate_ground_edge(0.2, -1.0, 0.0);
  EXPECT_DOUBLE_EQ(d.lambda_star, 0.5);
  EXPECT_DOUBLE_EQ(d.delta, 0.5 * (0.2 / 0.7 + 1.0));
}

TEST(GroundEdge, MessageQuotesInterval) {
  try {
    validate_ground_edge(0.2, -1.0, 0.0, 0.5, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadParameters);
    EXPECT_NE(std::string(e.what()).find("0.285714"), std::string::npos) << e.what();
  }
}

TEST(InternalEdge, Intervals) {
  const auto ms = MagneticStructure::from_frequencies({1.0}, 0);
  // E_{j-1} = -1.5, E_j = -1.0, E_{j+1} = -0.4: gaps 0.5 and 0.6; floor 0.4 < E_1 + 2b.
  const auto p = validate_internal_edge(ms, {-1.5, -1.0, -0.4}, 0.4, 2, 0.1, 1.0);
  EXPECT_NEAR(p.delta_minus_interval.lo, 0.25, 1e-15);
  EXPECT_NEAR(p.lambda_interval.hi, 0.2, 1e-15);
  EXPECT_NEAR(p.lambda_star, 0.1, 1e-15);
  EXPECT_NEAR(p.delta_plus_interval.lo, 0.1 / (0.1 + 0.6 - 0.1), 1e-15);
  EXPECT_THROW(validate_internal_edge(ms, {-1.5, -1.0, -0.4}, 0.4, 2, 0.1, 0.25), Error);
  EXPECT_THROW(validate_internal_edge(ms, {-1.5, -1.0, -0.4}, 0.4, 2, 0.1, 1.0, 0.2), Error);
}

TEST(InternalEdge, Hypotheses) {
  const auto ms = MagneticStructure::from_frequencies({1.0}, 0);
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  // M not below the lower gap.
  EXPECT_EQ(kind_of([&] { validate_internal_edge(ms, {-1.5, -1.0}, 0.0, 2, 0.6); }), ErrorKind::HypothesisViolated);
  // Nontrivial kernel.
  EXPECT_EQ(kind_of([&] { validate_internal_edge(MagneticStructure::from_frequencies({1.0}, 1), {-1.5, -1.0}, 0.0, 2, 0.1); }),
            ErrorKind::HypothesisViolated);
  // E_1 + Lambda_1 must exceed the floor.
  EXPECT_EQ(kind_of([&] { validate_internal_edge(ms, {-3.0, -1.0}, 0.0, 2, 0.1); }), ErrorKind::HypothesisViolated);
  // Last level uses the floor as its upper neighbour.
  const auto p = validate_internal_edge(ms, {-1.8, -0.3}, 0.0, 2, 0.3);
  EXPECT_EQ(p.E_next, 0.0);
}

TEST(GlobalSandwich, FreeCaseDegenerates) {
  const auto ms = MagneticStructure::zero_field(1);
  const auto rho = CountingMeasure::from_eigenvalues({-1.0}, 0.0);
  std::vector<double> E{-1.5, -0.8, -0.5, -0.1};
  std::vector<double> exact;
  for (double e : E) exact.push_back(free_ids(ms, e + 1.0));
  const auto report = global_sandwich(curve(E, exact), ms, rho, 0.0);
  EXPECT_TRUE(report.passed());
  for (const auto& row : report.rows) {
    EXPECT_EQ(row.lower, row.upper);
    EXPECT_EQ(row.target, row.lower);
  }
}

TEST(GlobalSandwich, FlagsViolation) {
  const auto ms = MagneticStructure::zero_field(1);
  const auto rho = CountingMeasure::from_eigenvalues({-1.0}, 0.0);
  const auto report = global_sandwich(curve({-0.5}, {0.5}), ms, rho, 0.1);
  EXPECT_EQ(report.violations(), 1u);
  EXPECT_THROW(global_sandwich(curve({0.5}, {0.5}), ms, rho, 0.1), Error);
}

TEST(GroundEdge, FreeCurvesPass) {
  const auto ms = MagneticStructure::zero_field(1);
  const auto params = validate_ground_edge(0.0 + 1e-9, -1.0, 0.0, 0.5);
  std::vector<double> lambda{0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<double> n0;
  for (double l : lambda) n0.push_back(free_ids(ms, l));
  const auto report = ground_edge_sandwich(curve(lambda, n0), curve(lambda, n0), curve(lambda, n0), params);
  EXPECT_TRUE(report.passed());
  EXPECT_THROW(ground_edge_sandwich(curve({0.6}, {0}), curve({0.6}, {0}), curve({0.6}, {0}), params), Error);
}

TEST(InternalEdge, DifferenceCurve) {
  const auto above = ensemble({0.1, 0.2}, {{5, 7}, {6, 6}});
  const auto edge = ensemble({0.0}, {{4}, {5}});
  const auto diff = difference_curve(above, edge, {0.1, 0.2});
  EXPECT_DOUBLE_EQ(diff.values[0], 1.0);
  EXPECT_DOUBLE_EQ(diff.values[1], 2.0);
}

TEST(IntegerChecks, FiniteVolumeSandwich) {
  const auto lower = ensemble({0.0, 1.0}, {{0, 1}, {0, 2}});
  const auto middle = ensemble({0.0, 1.0}, {{1, 2}, {0, 2}});
  const auto upper = ensemble({0.0, 1.0}, {{1, 3}, {1, 2}});
  const auto ok = finite_volume_sandwich_check(lower, middle, upper);
  EXPECT_TRUE(ok.passed());
  EXPECT_EQ(ok.checks, 8u);
  const auto bad = finite_volume_sandwich_check(upper, middle, lower);
  EXPECT_FALSE(bad.passed());
}

TEST(IntegerChecks, ProjectionBound) {
  const auto surface = ensemble({0.1}, {{3}, {2}});
  EXPECT_TRUE(projection_bound_check(surface, ensemble({0.1}, {{3}, {1}})).passed());
  const auto report = projection_bound_check(surface, ensemble({0.1}, {{2}, {3}}));
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].realization, 1u);
}

TEST(Plateau, Value) {
  EXPECT_NEAR(plateau_value(MagneticStructure::from_frequencies({1.0}, 0), 2), 1.0 / (2.0 * std::numbers::pi), 1e-15);
  EXPECT_EQ(plateau_value(MagneticStructure::from_frequencies({1.0}, 0), 1), 0.0);
}

TEST(Plateau, Check) {
  const auto ms = MagneticStructure::from_frequencies({1.0}, 0);
  auto edges = summarize_counts({{63, 63}, {64, 64}}, {-0.6, -0.3}, 400.0, {});
  const auto good = plateau_check(edges, 2, 0.3, ms);
  EXPECT_TRUE(good.constant);
  EXPECT_TRUE(good.value_ok);
  edges = summarize_counts({{63, 64}, {64, 64}}, {-0.6, -0.3}, 400.0, {});
  const auto bad = plateau_check(edges, 2, 0.3, ms);
  EXPECT_FALSE(bad.constant);
  EXPECT_EQ(bad.realizations_with_eigenvalues, 1u);
}

TEST(FitLifshits, PowerLawOnLogAxis) {
  const auto lambda = geometric(0.05, 0.5, 30);
  std::vector<double> y;
  for (double l : lambda) y.push_back(std::exp(-std::pow(l, -2.0)));
  const auto fit = fit_lifshits(lambda, y, LifshitsAxis::log_lambda, 0.05, 0.5);
  EXPECT_NEAR(fit.slope, -2.0, 1e-6);
  EXPECT_EQ(fit.n_used, 30u);
}

TEST(FitLifshits, LogLogAxis) {
  // exp(-|ln l|^3) underflows once |ln l| passes about 9, so the window stays above 2e-4.
  const auto lambda = geometric(2e-4, 0.05, 30);
  std::vector<double> y;
  for (double l : lambda) y.push_back(std::exp(-std::pow(std::abs(std::log(l)), 3.0)));
  const auto fit = fit_lifshits(lambda, y, LifshitsAxis::loglog_lambda, 2e-4, 0.05);
  EXPECT_NEAR(fit.slope, 3.0, 1e-6);
}

TEST(FitLifshits, ConstantInsideExponent) {
  const auto lambda = geometric(0.07, 0.5, 40);
  std::vector<double> y;
  for (double l : lambda) y.push_back(std::exp(-3.0 * std::pow(l, -2.0)));
  const auto fit = fit_lifshits(lambda, y, LifshitsAxis::log_lambda, 0.07, 0.5);
  EXPECT_NEAR(fit.slope, lifshits_targets::nonmagnetic_power(2, 3.0), 1e-3);
}

TEST(FitLifshits, RescalingMovesSlopeLittle) {
  const auto lambda = geometric(0.05, 0.5, 30);
  std::vector<double> y;
  for (double l : lambda) y.push_back(std::exp(-std::pow(l, -2.0)));
  const double base = fit_lifshits(lambda, y, LifshitsAxis::log_lambda, 0.05, 0.5).slope;
  for (double c : {0.5, 0.8, 1.25, 2.0}) {
    std::vector<double> scaled;
    for (double v : y) scaled.push_back(std::min(c * v, 0.999));
    const double s = fit_lifshits(lambda, scaled, LifshitsAxis::log_lambda, 0.05, 0.5).slope;
    EXPECT_LT(std::abs(s - base), 0.05 * std::abs(base)) << c;
  }
}

TEST(FitLifshits, MaskingAndErrors) {
  const auto lambda = geometric(0.1, 1.0, 8);
  std::vector<double> y(lambda.size(), 0.0);
  auto kind_of = [&](const std::vector<double>& values) {
    try {
      fit_lifshits(lambda, values, LifshitsAxis::log_lambda, 0.1, 1.0);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  EXPECT_EQ(kind_of(y), ErrorKind::DegenerateWindow);
  y = {0.5, 0.4, 0.3, 0.2, 0.0, 1.0, 1.5, 0.0};
  EXPECT_EQ(kind_of(y), ErrorKind::TooFewPoints);
  y = {0.5, 0.4, 0.3, 0.2, 0.1, 1.0, 0.05, 0.0};
  const auto fit = fit_lifshits(lambda, y, LifshitsAxis::log_lambda, 0.1, 1.0);
  EXPECT_EQ(fit.n_used, 6u);
  EXPECT_TRUE(fit.masked[5]);
  EXPECT_TRUE(fit.masked[7]);
  EXPECT_GT(fit.ci_half_width, 0.0);
}

TEST(LifshitsTargets, Values) {
  EXPECT_DOUBLE_EQ(lifshits_targets::magnetic_power(4.0), -1.0);
  EXPECT_DOUBLE_EQ(lifshits_targets::magnetic_gaussian(2.0), 2.0);
  EXPECT_DOUBLE_EQ(lifshits_targets::magnetic_compact(), 2.0);
  EXPECT_DOUBLE_EQ(lifshits_targets::nonmagnetic_power(2, 3.0), -2.0);
  EXPECT_DOUBLE_EQ(lifshits_targets::nonmagnetic_short_range(3), -1.5);
}

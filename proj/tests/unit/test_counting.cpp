#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "surfstates/counting.hpp"
#include "surfstates/error.hpp"
#include "surfstates/hamiltonians.hpp"
#include "surfstates/linalg.hpp"
#include "surfstates/magnetic.hpp"

using namespace surfstates;

namespace {

SparseHermitian diagonal(std::initializer_list<double> values) {
  SparseHermitian H(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (double v : values) {
    H.insert(k, k) = Complex(v, 0.0);
    ++k;
  }
  H.makeCompressed();
  return H;
}

SparseHermitian random_hermitian(int n, std::uint64_t seed, double density = 0.15) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, Complex(3.0 * unit(rng), 0.0));
    for (int j = i + 1; j < n; ++j) {
      if (!keep(rng)) continue;
      const Complex z(unit(rng), unit(rng));
      t.emplace_back(i, j, z);
      t.emplace_back(j, i, std::conj(z));
    }
  }
  SparseHermitian H(n, n);
  H.setFromTriplets(t.begin(), t.end());
  return H;
}

Eigen::MatrixXd field2(double b) {
  Eigen::MatrixXd B(2, 2);
  B << 0, b, -b, 0;
  return B;
}

SurfaceModel free_model(const Eigen::MatrixXd& B, std::vector<double> levels, double floor = 0.0) {
  SurfaceModel model;
  model.B = B;
  model.parallel = solve_parallel(ExplicitSpectrumModel{levels, floor}, std::nullopt, static_cast<int>(levels.size()));
  model.mode = LongitudinalMode::injected(static_cast<int>(levels.size()));
  return model;
}

SurfaceModel random_model(const Eigen::MatrixXd& B, std::vector<double> levels, double E0 = 0.3) {
  auto model = free_model(B, std::move(levels));
  model.disorder = DisorderModel{{CompactShape{0.5, 1.0}, ConstantFactor{}}, CouplingLaw::uniform(E0)};
  return model;
}

}  // namespace

TEST(CountBelow, Trivial) {
  EXPECT_EQ(count_below(diagonal({5.0}), 4.0).count, 0);
  EXPECT_EQ(count_below(diagonal({5.0}), 6.0).count, 1);
  EXPECT_EQ(count_below(diagonal({1.0, 2.0, 3.0}), 2.0).count, 1);
}

TEST(CountBelow, InertiaAgreesWithDense) {
  const auto H = random_hermitian(50, 11);
  const Eigen::VectorXd eig = dense_eigenvalues(H);
  CountingOptions inertia;
  inertia.dense_cap = 0;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> energy(eig.minCoeff() - 0.5, eig.maxCoeff() + 0.5);
  for (int k = 0; k < 20; ++k) {
    const double E = energy(rng);
    const auto dense = count_below(H, E);
    const auto sparse = count_below(H, E, inertia);
    EXPECT_EQ(dense.path, CountPath::dense);
    EXPECT_EQ(sparse.path, CountPath::inertia);
    EXPECT_EQ(dense.count, sparse.count) << "E=" << E;
    EXPECT_EQ(dense.count, (eig.array() < E).count());
  }
}

TEST(CountBelow, InertiaAtExactEigenvalue) {
  CountingOptions inertia;
  inertia.dense_cap = 0;
  const auto H = diagonal({1.0, 2.0, 2.0, 3.0});
  EXPECT_EQ(count_below(H, 2.0, inertia).count, 1);
  EXPECT_EQ(count_below(H, 2.0 + 1e-6, inertia).count, 3);
}

TEST(CountBelow, InertiaOnMagneticOperator) {
  const auto op = build_transverse(LatticeWindow::cube(2, 5.0, 0.25), field2(1.0));
  const Eigen::VectorXd eig = dense_eigenvalues(op.matrix);
  SpectrumCounter counter(op.matrix, {0, 1e-10});
  for (double E : {-0.5, 0.0, 0.5, 1.9, 2.1, 4.5, 10.0}) {
    EXPECT_EQ(counter(E), (eig.array() < E).count()) << E;
  }
}

TEST(SpectrumCounter, EigenvalueBisection) {
  const auto H = random_hermitian(40, 3);
  const Eigen::VectorXd eig = dense_eigenvalues(H);
  SpectrumCounter sparse(H, {0, 1e-10});
  SpectrumCounter dense(H);
  for (int k : {0, 7, 39}) {
    EXPECT_NEAR(sparse.eigenvalue(k, eig.minCoeff() - 1.0, eig.maxCoeff() + 1.0, 1e-10), eig(k), 1e-8);
    EXPECT_NEAR(dense.eigenvalue(k, eig.minCoeff() - 1.0, eig.maxCoeff() + 1.0, 1e-10), eig(k), 1e-12);
  }
}

TEST(DetectClusters, SyntheticBands) {
  // Three tight bands of 30 states at 0, 2 and 4 with a sparse background in between.
  std::vector<Triplet> t;
  int k = 0;
  for (double centre : {0.0, 2.0, 4.0})
    for (int i = 0; i < 30; ++i, ++k) t.emplace_back(k, k, Complex(centre - 0.01 + 0.0005 * i, 0.0));
  for (double e = 0.3; e < 4.9; e += 0.35, ++k) t.emplace_back(k, k, Complex(e, 0.0));
  SparseHermitian H(k, k);
  H.setFromTriplets(t.begin(), t.end());
  for (std::size_t cap : {std::size_t{0}, std::size_t{1000}}) {
    SpectrumCounter counter(H, {cap, 1e-10});
    std::vector<double> grid;
    for (double E = -0.5; E <= 5.0 + 1e-9; E += 0.25) grid.push_back(E);
    const auto clusters = detect_clusters(counter, grid);
    ASSERT_EQ(clusters.size(), 3u);
    for (int q = 0; q < 3; ++q) EXPECT_NEAR(clusters[q].center, 2.0 * q, 0.02) << q;
    EXPECT_EQ(clusters[0].count_before, 0);
    EXPECT_EQ(clusters[0].size, 30);
  }
}

TEST(EmpiricalCurve, Interpolation) {
  EmpiricalCurve c;
  c.energies = {0.0, 1.0, 2.0};
  c.values = {0.0, 1.0, 1.0};
  c.std_err = {0.0, 0.0, 0.0};
  EXPECT_TRUE(c.is_monotone());
  EXPECT_EQ(c.at(1.0), 1.0);
  EXPECT_THROW(c.at(1.5), Error);
}

TEST(SummarizeCounts, Statistics) {
  const auto res = summarize_counts({{0, 2}, {0, 4}, {0, 6}}, {0.0, 1.0}, 2.0, {});
  EXPECT_EQ(res.stats.n, 3u);
  EXPECT_NEAR(res.curve.values[1], 2.0, 1e-15);
  EXPECT_NEAR(res.stats.stddev[1], 1.0, 1e-15);
  EXPECT_NEAR(res.curve.std_err[1], 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_LE(res.stats.min[1], res.stats.mean[1]);
  EXPECT_GE(res.stats.max[1], res.stats.mean[1]);
}

TEST(RealizationSeed, DistinctAndStable) {
  EXPECT_EQ(realization_seed(7, 3), realization_seed(7, 3));
  EXPECT_NE(realization_seed(7, 3), realization_seed(7, 4));
  EXPECT_NE(realization_seed(7, 3), realization_seed(8, 3));
}

TEST(IdssEstimate, FreeOneDimensional) {
  // d = 1, B = 0, single level E_1 = -1: nu(E) approaches sqrt(E + 1) / pi.
  const auto model = free_model(Eigen::MatrixXd::Zero(1, 1), {-1.0}, 10.0);
  SurfaceExperiment exp(model, LatticeWindow::cube(1, 60.0, 0.02));
  EnsembleConfig config;
  config.energies = {-1.5, -1.0, 0.0, 1.0, 2.0};
  const auto res = idss_estimate(exp, config);
  EXPECT_EQ(res.curve.values[0], 0.0);
  EXPECT_EQ(res.curve.values[1], 0.0);
  for (std::size_t e = 2; e < config.energies.size(); ++e) {
    const double exact = std::sqrt(config.energies[e] + 1.0) / std::numbers::pi;
    EXPECT_NEAR(res.curve.values[e] / exact, 1.0, 0.03);
  }
  EXPECT_TRUE(res.curve.is_monotone());
  EXPECT_EQ(res.curve.normalization, 60.0);
}

TEST(IdssEstimate, DirectSumIdentity) {
  const auto model = free_model(field2(1.0), {-2.0, -0.7});
  SurfaceExperiment exp(model, LatticeWindow::cube(2, 4.0, 0.25));
  SpectrumCounter full(exp.free_operator().matrix);
  SpectrumCounter perp(exp.transverse().matrix);
  for (double E = -2.5; E < -0.01; E += 0.1) {
    std::int64_t sum = 0;
    for (double Ej : {-2.0, -0.7})
      if (Ej < E) sum += perp(E - Ej);
    EXPECT_EQ(full(E), sum) << E;
  }
}

TEST(IdssEstimate, RejectsEnergiesAboveFloor) {
  const auto model = free_model(field2(1.0), {-1.0});
  SurfaceExperiment exp(model, LatticeWindow::cube(2, 2.0, 0.25));
  EnsembleConfig config;
  config.energies = {-0.5, 0.0};
  try {
    idss_estimate(exp, config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AboveEssentialFloor);
  }
}

TEST(IdssEstimate, MonotoneOnEveryRealization) {
  const auto model = random_model(field2(1.0), {-1.5});
  SurfaceExperiment exp(model, LatticeWindow::cube(2, 3.0, 0.25));
  EnsembleConfig config;
  for (double E = -1.6; E < -0.1; E += 0.1) config.energies.push_back(E);
  config.realizations = 4;
  config.seed = 9;
  const auto res = idss_estimate(exp, config);
  for (const auto& row : res.counts) {
    for (std::size_t e = 1; e < row.size(); ++e) EXPECT_LE(row[e - 1], row[e]);
  }
}

TEST(IdssEstimate, ThreadCountDoesNotChangeResult) {
  const auto model = random_model(field2(1.0), {-1.5});
  SurfaceExperiment exp(model, LatticeWindow::cube(2, 3.0, 0.25));
  EnsembleConfig config;
  config.energies = {-1.2, -0.8, -0.3};
  config.realizations = 6;
  config.seed = 1;
  const auto a = idss_estimate(exp, config);
  config.threads = 3;
  const auto b = idss_estimate(exp, config);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_EQ(a.curve.values, b.curve.values);
}

TEST(ReducedIds, ConstantFieldShiftsCurve) {
  auto model = free_model(field2(1.0), {-1.0});
  model.disorder = DisorderModel{{CompactShape{0.5, 1.0}, ConstantFactor{}}, CouplingLaw::uniform(1.0)};
  SurfaceExperiment exp(model, LatticeWindow::cube(2, 3.0, 0.25));
  // The reduced operator at scale 0 is the transverse operator itself.
  SpectrumCounter zero(exp.reduced_operator(1, 1, 0.0));
  SpectrumCounter perp(exp.transverse().matrix);
  for (double E : {-0.5, 0.5, 2.5}) EXPECT_EQ(zero(E), perp(E));
}

TEST(ReducedIds, ScalingIsMonotone) {
  const auto model = random_model(field2(1.0), {-1.0}, 0.5);
  SurfaceExperiment exp(model, LatticeWindow::cube(2, 3.0, 0.25));
  EnsembleConfig config;
  for (double E = 0.0; E < 1.0; E += 0.1) config.energies.push_back(E);
  config.realizations = 3;
  const auto full = reduced_ids_estimate(exp, config, 1, 1.0);
  const auto weak = reduced_ids_estimate(exp, config, 1, 0.6);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t e = 0; e < config.energies.size(); ++e) EXPECT_LE(full.counts[r][e], weak.counts[r][e]);
}

TEST(Superadditivity, FreeOneDimensional) {
  const auto model = free_model(Eigen::MatrixXd::Zero(1, 1), {-1.0});
  EnsembleConfig config;
  for (int k = 0; k < 50; ++k) config.energies.push_back(-1.2 + 0.02 * k);
  const auto report = superadditivity_check(model, LatticeWindow::cube(1, 10.0, 0.05), config);
  EXPECT_EQ(report.violations, 0u);
  EXPECT_EQ(report.rows.front().whole, 0);
}

TEST(Superadditivity, RandomTwoDimensional) {
  const auto model = random_model(field2(1.0), {-1.0});
  EnsembleConfig config;
  for (double E = -1.0; E < -0.05; E += 0.05) config.energies.push_back(E);
  config.realizations = 10;
  config.seed = 77;
  const auto report = superadditivity_check(model, LatticeWindow::cube(2, 4.0, 0.25), config);
  EXPECT_EQ(report.violations, 0u);
}

TEST(ConvergenceStudy, FreeCaseDifferencesShrink) {
  const auto model = free_model(Eigen::MatrixXd::Zero(1, 1), {-1.0}, 10.0);
  EnsembleConfig config;
  config.energies = {-0.5, 0.3, 1.1};
  const auto rows = convergence_study(model, {5.0, 10.0, 20.0, 40.0}, 0.05, config);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_TRUE(rows[0].difference.empty());
  double first = 0.0, last = 0.0;
  for (double v : rows[1].difference) first += v;
  for (double v : rows[3].difference) last += v;
  EXPECT_LT(last, first);
}

TEST(ConvergenceStudy, GapStaysEmpty) {
  const auto model = free_model(field2(1.0), {-1.0});
  EnsembleConfig config;
  config.energies = {-1.5};
  for (const auto& row : convergence_study(model, {2.0, 4.0}, 0.25, config)) EXPECT_EQ(row.values[0], 0.0);
}

TEST(ConvergenceStudy, StdErrorScalesWithRealizations) {
  const auto model = random_model(Eigen::MatrixXd::Zero(1, 1), {-1.0}, 1.0);
  SurfaceExperiment exp(model, LatticeWindow::cube(1, 10.0, 0.1));
  EnsembleConfig config;
  config.energies = {-0.2};
  config.realizations = 200;
  const double se200 = idss_estimate(exp, config).curve.std_err[0];
  config.realizations = 400;
  const double se400 = idss_estimate(exp, config).curve.std_err[0];
  EXPECT_NEAR(se400 / se200, 1.0 / std::sqrt(2.0), 0.15);
}

TEST(ParallelFor, RethrowsLowestIndexError) {
  try {
    parallel_for(10, 3, [](std::size_t i) {
      if (i == 4 || i == 7) throw Error(ErrorKind::SolverFailure, std::to_string(i));
    });
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(": 4"), std::string::npos) << e.what();
  }
}

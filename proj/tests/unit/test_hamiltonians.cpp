#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "surfstates/error.hpp"
#include "surfstates/hamiltonians.hpp"
#include "surfstates/lattice.hpp"
#include "surfstates/linalg.hpp"

using namespace surfstates;

namespace {

Eigen::MatrixXd field2(double b) {
  Eigen::MatrixXd B(2, 2);
  B << 0, b, -b, 0;
  return B;
}

double max_entry_difference(const SparseHermitian& A, const SparseHermitian& B) {
  const Eigen::MatrixXcd D = Eigen::MatrixXcd(A) - Eigen::MatrixXcd(B);
  return D.cwiseAbs().maxCoeff();
}

Eigen::VectorXd sorted(Eigen::VectorXd v) {
  std::sort(v.data(), v.data() + v.size());
  return v;
}

}  // namespace

TEST(LatticeWindow, CountsAndCoordinates) {
  const auto w = LatticeWindow::cube(2, 4.0, 0.5, {1.0, -1.0});
  EXPECT_EQ(w.count(0), 7);
  EXPECT_EQ(w.size(), 49u);
  EXPECT_DOUBLE_EQ(w.volume(), 16.0);
  EXPECT_DOUBLE_EQ(w.coordinate(0, 0), -0.5);
  EXPECT_DOUBLE_EQ(w.coordinate(1, 6), 1.0 - 0.5);
  for (std::size_t p = 0; p < w.size(); ++p) EXPECT_EQ(w.flatten(w.unflatten(p)), p);
}

TEST(LatticeWindow, RejectsNonIntegerRatio) {
  EXPECT_THROW(LatticeWindow::cube(1, 1.0, 0.3), Error);
  EXPECT_THROW(LatticeWindow::cube(1, 1.0, 1.0), Error);
}

TEST(LatticeWindow, TranslationMovesEveryPoint) {
  const auto w = LatticeWindow::box({2.0, 3.0}, 0.5);
  const auto t = w.translated({3, -2});
  ASSERT_EQ(t.size(), w.size());
  for (std::size_t p = 0; p < w.size(); ++p) {
    EXPECT_NEAR(t.point(p)[0], w.point(p)[0] + 3.0, 1e-14);
    EXPECT_NEAR(t.point(p)[1], w.point(p)[1] - 2.0, 1e-14);
  }
}

TEST(BuildTransverse, SmallestDirichletLaplacian) {
  const auto op = build_transverse(LatticeWindow::cube(1, 1.0, 0.5), Eigen::MatrixXd::Zero(1, 1));
  ASSERT_EQ(op.matrix.rows(), 1);
  EXPECT_NEAR(std::abs(op.matrix.coeff(0, 0) - Complex(8.0, 0.0)), 0.0, 1e-14);
}

TEST(BuildTransverse, ZeroFieldIsDirichletLaplacian) {
  const auto w = LatticeWindow::box({2.0, 1.5}, 0.25);
  const auto op = build_transverse(w, Eigen::MatrixXd::Zero(2, 2));
  const double h2 = 0.0625;
  for (std::size_t p = 0; p < w.size(); ++p) {
    EXPECT_NEAR(op.matrix.coeff(p, p).real(), 4.0 / h2, 1e-12);
    const auto ip = w.unflatten(p);
    for (std::size_t q = 0; q < w.size(); ++q) {
      if (q == p) continue;
      const auto iq = w.unflatten(q);
      const int dist = std::abs(ip[0] - iq[0]) + std::abs(ip[1] - iq[1]);
      const Complex expected = dist == 1 ? Complex(-1.0 / h2, 0.0) : Complex(0.0, 0.0);
      EXPECT_NEAR(std::abs(op.matrix.coeff(p, q) - expected), 0.0, 1e-12);
    }
  }
}

TEST(BuildTransverse, ZeroFieldSpectrumNonNegative) {
  const auto op = build_transverse(LatticeWindow::cube(2, 3.0, 0.25), Eigen::MatrixXd::Zero(2, 2));
  EXPECT_GT(dense_eigenvalues(op.matrix).minCoeff(), 0.0);
}

TEST(BuildTransverse, HermitianWithField) {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3, 3);
  B(0, 1) = 1.3;
  B(1, 0) = -1.3;
  const auto op = build_transverse(LatticeWindow::cube(3, 2.0, 0.25), B);
  EXPECT_LE(hermiticity_defect(op.matrix), 1e-12 * max_row_sum_norm(op.matrix));
  EXPECT_NEAR(op.max_plaquette_flux, 1.3 * 0.0625, 1e-14);
}

TEST(BuildTransverse, LowestEigenvalueApproachesPiSquared) {
  double previous_error = 1.0;
  for (double h : {0.1, 0.05, 0.025}) {
    const auto op = build_transverse(LatticeWindow::cube(1, 1.0, h), Eigen::MatrixXd::Zero(1, 1));
    const double err = std::abs(dense_eigenvalues(op.matrix).minCoeff() - std::numbers::pi * std::numbers::pi);
    EXPECT_LT(err, previous_error / 3.5);  // second order in h
    previous_error = err;
  }
  EXPECT_LT(previous_error, 6e-3);
}

TEST(BuildTransverse, FluxLimits) {
  try {
    build_transverse(LatticeWindow::cube(2, 4.0, 0.8), field2(1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FluxTooLarge);
  }
  EXPECT_TRUE(build_transverse(LatticeWindow::cube(2, 4.0, 0.5), field2(1.0)).flux_warning);
  EXPECT_FALSE(build_transverse(LatticeWindow::cube(2, 4.0, 0.25), field2(1.0)).flux_warning);
  EXPECT_THROW(build_transverse(LatticeWindow::cube(2, 4.0, 0.5), Eigen::MatrixXd::Identity(2, 2)), NotAntisymmetric);
}

TEST(BuildTransverse, LandauGroundBandAtModerateSize) {
  // The bulk lowest band of the midpoint Peierls lattice sits at about -b^2 h^2 / 8.
  const double h = 0.1;
  const auto op = build_transverse(LatticeWindow::cube(2, 20.0, h), field2(1.0));
  const double e0 = ground_energy(op);
  EXPECT_GT(e0, -0.25 * h * h);
  EXPECT_LT(e0, 0.05);
  EXPECT_NEAR(e0, -h * h / 8.0, 1e-4);
}

TEST(GroundEnergy, DirichletSquare) {
  const double e = ground_energy(build_transverse(LatticeWindow::cube(2, 10.0, 0.05), Eigen::MatrixXd::Zero(2, 2)));
  const double exact = 2.0 * std::numbers::pi * std::numbers::pi / 100.0;
  EXPECT_NEAR(e / exact, 1.0, 0.01);
}

TEST(GroundEnergy, DomainMonotonicity) {
  for (const auto& B : {Eigen::MatrixXd(Eigen::MatrixXd::Zero(2, 2)), field2(1.0)}) {
    double previous = std::numeric_limits<double>::infinity();
    for (double L : {2.0, 3.0, 5.0, 8.0}) {
      const double e = ground_energy(build_transverse(LatticeWindow::cube(2, L, 0.25), B));
      EXPECT_LT(e, previous) << "L=" << L;
      previous = e;
    }
  }
}

TEST(GroundEnergy, IterativePathMatchesDense) {
  for (const auto& B : {Eigen::MatrixXd(Eigen::MatrixXd::Zero(2, 2)), field2(0.8)}) {
    const auto op = build_transverse(LatticeWindow::cube(2, 4.0, 0.125), B);
    const double dense = dense_eigenvalues(op.matrix).minCoeff();
    GroundEnergyOptions options;
    options.dense_cap = 10;
    EXPECT_NEAR(ground_energy(op.matrix, options), dense, 1e-10 * max_row_sum_norm(op.matrix));
  }
}

TEST(GroundEnergy, MagneticDecayTrend) {
  // ln Z(L) / L^2 should decrease along the ladder.
  std::vector<double> trend;
  for (double L : {3.0, 4.0, 5.0}) {
    const double z = ground_energy(build_transverse(LatticeWindow::cube(2, L, 0.125), field2(1.0)));
    const double shifted = z + 0.125 * 0.125 / 8.0;  // remove the lattice offset of the bulk band
    ASSERT_GT(shifted, 0.0);
    trend.push_back(std::log(shifted) / (L * L));
  }
  EXPECT_LT(trend[2], trend[0]);
}

TEST(SolveParallel, DeltaWell) {
  const auto par = solve_parallel(DeltaWellModel{2.0}, LatticeWindow::cube(1, 40.0, 0.01), 1);
  ASSERT_EQ(par.eigenpairs.size(), 1u);
  EXPECT_NEAR(par.eigenpairs[0].energy, -1.0, 1e-3);
  EXPECT_EQ(par.essential_floor, 0.0);
  EXPECT_NEAR(par.eigenpairs[0].psi.squaredNorm() * 0.01, 1.0, 1e-12);
}

TEST(SolveParallel, HarmonicOscillator) {
  GridPotentialModel model{[](const std::vector<double>& y) { return y[0] * y[0]; }, true, "harmonic"};
  const auto par = solve_parallel(model, LatticeWindow::cube(1, 20.0, 0.01), 3);
  ASSERT_EQ(par.eigenpairs.size(), 3u);
  EXPECT_NEAR(par.eigenpairs[0].energy, 1.0, 1e-2);
  EXPECT_NEAR(par.eigenpairs[1].energy, 3.0, 1e-2);
  EXPECT_NEAR(par.eigenpairs[2].energy, 5.0, 1e-2);
  EXPECT_TRUE(std::isinf(par.essential_floor));
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const double ip = par.eigenpairs[a].psi.dot(par.eigenpairs[b].psi) * 0.01;
      EXPECT_NEAR(ip, a == b ? 1.0 : 0.0, 1e-8);
    }
  }
}

TEST(SolveParallel, ExplicitSpectrum) {
  const auto par = solve_parallel(ExplicitSpectrumModel{{-1.0}, 0.0}, std::nullopt, 1);
  ASSERT_EQ(par.eigenpairs.size(), 1u);
  EXPECT_EQ(par.eigenpairs[0].energy, -1.0);
  EXPECT_FALSE(par.has_vectors());
}

TEST(SolveParallel, FlagsTooFewStates) {
  const auto par = solve_parallel(DeltaWellModel{2.0}, LatticeWindow::cube(1, 20.0, 0.02), 3);
  EXPECT_EQ(par.eigenpairs.size(), 1u);
  EXPECT_TRUE(par.too_few_states);
}

TEST(SolveParallel, NoBoundState) {
  GridPotentialModel barrier{[](const std::vector<double>& y) { return std::abs(y[0]) < 1.0 ? 1.0 : 0.0; }, false, "barrier"};
  try {
    solve_parallel(barrier, LatticeWindow::cube(1, 10.0, 0.05), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoBoundState);
  }
}

TEST(SolveParallel, TwoDimensionalWell) {
  GridPotentialModel model{[](const std::vector<double>& y) { return y[0] * y[0] + y[1] * y[1]; }, true, "harmonic2"};
  const auto par = solve_parallel(model, LatticeWindow::cube(2, 10.0, 0.2), 3);
  EXPECT_NEAR(par.eigenpairs[0].energy, 2.0, 0.02);
  EXPECT_NEAR(par.eigenpairs[1].energy, 4.0, 0.05);
  EXPECT_NEAR(par.eigenpairs[2].energy, 4.0, 0.05);
}

TEST(Assemble, KroneckerSumSpectrum) {
  const auto op = build_transverse(LatticeWindow::cube(1, 7.0, 1.0), Eigen::MatrixXd::Zero(1, 1));
  GridPotentialModel model{[](const std::vector<double>& y) { return 0.3 * y[0] * y[0]; }, true, "q"};
  const auto par = solve_parallel(model, LatticeWindow::cube(1, 7.0, 1.0), 2);
  ASSERT_EQ(op.matrix.rows(), 6);
  const auto H = assemble(op, par, LongitudinalMode::full_grid());
  ASSERT_EQ(H.matrix.rows(), 36);
  const Eigen::VectorXd a = dense_eigenvalues(op.matrix);
  const Eigen::VectorXd b = dense_eigenvalues(par.grid_operator);
  Eigen::VectorXd sums(36);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) sums(6 * i + j) = a(i) + b(j);
  const Eigen::VectorXd got = dense_eigenvalues(H.matrix);
  EXPECT_LT((sorted(sums) - sorted(got)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Assemble, InjectedSpectrumIsDirectSum) {
  const auto op = build_transverse(LatticeWindow::cube(2, 3.0, 0.5), field2(1.0));
  const auto par = solve_parallel(ExplicitSpectrumModel{{-2.0, -0.5}, 0.0}, std::nullopt, 2);
  const auto H = assemble(op, par, LongitudinalMode::injected(2));
  const Eigen::VectorXd a = dense_eigenvalues(op.matrix);
  Eigen::VectorXd expected(2 * a.size());
  expected << a.array() - 2.0, a.array() - 0.5;
  EXPECT_LT((sorted(expected) - sorted(dense_eigenvalues(H.matrix))).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(Assemble, ConstantPotentialShiftsSpectrum) {
  const auto op = build_transverse(LatticeWindow::cube(2, 3.0, 0.5), field2(1.0));
  const auto par = solve_parallel(ExplicitSpectrumModel{{-1.0}, 0.0}, std::nullopt, 1);
  const auto V = PotentialSample::y_independent(Eigen::VectorXd::Constant(op.window.size(), 0.37));
  const Eigen::VectorXd free = sorted(dense_eigenvalues(assemble(op, par, LongitudinalMode::injected(1)).matrix));
  const Eigen::VectorXd shifted = sorted(dense_eigenvalues(assemble(op, par, LongitudinalMode::injected(1), &V).matrix));
  EXPECT_LT((free.array() + 0.37 - shifted.array()).abs().maxCoeff(), 1e-12);
}

TEST(Assemble, WeylMonotonicity) {
  const auto op = build_transverse(LatticeWindow::cube(2, 3.0, 0.5), field2(1.0));
  GridPotentialModel model{[](const std::vector<double>& y) { return y[0] * y[0]; }, true, "harmonic"};
  const auto par = solve_parallel(model, LatticeWindow::cube(1, 4.0, 0.5), 2);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double M = 0.6;
  const std::size_t n = op.window.size() * par.grid->size();
  Eigen::VectorXd values(n);
  for (auto& v : values) v = M * unit(rng);
  const auto V = PotentialSample::tabulated(values);
  const Eigen::VectorXd h0 = sorted(dense_eigenvalues(assemble(op, par, LongitudinalMode::full_grid()).matrix));
  const Eigen::VectorXd hw = sorted(dense_eigenvalues(assemble(op, par, LongitudinalMode::full_grid(), &V).matrix));
  for (Eigen::Index k = 0; k < h0.size(); ++k) {
    EXPECT_LE(h0(k), hw(k) + 1e-12);
    EXPECT_LE(hw(k), h0(k) + M + 1e-12);
  }
}

TEST(Assemble, BudgetExceeded) {
  const auto op = build_transverse(LatticeWindow::cube(2, 5.0, 0.5), field2(1.0));
  const auto par = solve_parallel(ExplicitSpectrumModel{{-1.0, -0.5}, 0.0}, std::nullopt, 2);
  try {
    assemble(op, par, LongitudinalMode::injected(2), nullptr, 100);
    FAIL();
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.required(), 162u);
    EXPECT_EQ(e.allowed(), 100u);
  }
}

TEST(Assemble, CoordinateListExport) {
  const auto op = build_transverse(LatticeWindow::cube(1, 1.0, 0.5), Eigen::MatrixXd::Zero(1, 1));
  std::ostringstream out;
  write_coordinate_list(out, op.matrix);
  EXPECT_NE(out.str().find("8"), std::string::npos);
}

TEST(MagneticTranslate, ZeroShiftIsIdentity) {
  const auto op = build_transverse(LatticeWindow::cube(2, 3.0, 0.5), field2(1.0));
  const auto t = magnetic_translate(op, {0, 0});
  EXPECT_LT((t.phases.array() - Complex(1.0, 0.0)).abs().maxCoeff(), 1e-15);
}

TEST(MagneticTranslate, ZeroFieldIsPlainShift) {
  const auto op = build_transverse(LatticeWindow::cube(2, 3.0, 0.5), Eigen::MatrixXd::Zero(2, 2));
  const auto t = magnetic_translate(op, {2, -1});
  EXPECT_LT((t.phases.array() - Complex(1.0, 0.0)).abs().maxCoeff(), 1e-15);
  const auto moved = build_transverse(t.target, op.B);
  EXPECT_LT(max_entry_difference(moved.matrix, op.matrix), 1e-12);
}

TEST(MagneticTranslate, PhasesIntertwineShiftedOperator) {
  for (const std::vector<std::int64_t>& xi : {std::vector<std::int64_t>{1, 0}, {0, 1}, {-2, 3}}) {
    const auto op = build_transverse(LatticeWindow::cube(2, 4.0, 0.25), field2(1.0));
    const auto t = magnetic_translate(op, xi);
    const auto moved = build_transverse(t.target, op.B);
    EXPECT_LT(max_entry_difference(conjugate_by_phases(moved.matrix, t.phases), op.matrix), 1e-12);
  }
}

TEST(MagneticTranslate, NeedsCanonicalField) {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3, 3);
  B(0, 2) = 1.0;
  B(2, 0) = -1.0;
  const auto op = build_transverse(LatticeWindow::cube(3, 1.0, 0.25), B);
  EXPECT_THROW(magnetic_translate(op, {1, 0, 0}), Error);
}

TEST(Linalg, KroneckerSumIndexing) {
  const auto A = sparse_identity(2);
  SparseHermitian B(3, 3);
  B.insert(0, 1) = Complex(0.0, 1.0);
  B.insert(1, 0) = Complex(0.0, -1.0);
  const auto K = kronecker_sum(A, B);
  EXPECT_EQ(K.rows(), 6);
  EXPECT_EQ(K.coeff(3 + 0, 3 + 1), Complex(0.0, 1.0));
  EXPECT_EQ(K.coeff(2, 2), Complex(1.0, 0.0));
}

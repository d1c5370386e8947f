#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "commands.hpp"
#include "surfstates/analysis.hpp"
#include "surfstates/curve_io.hpp"
#include "surfstates/error.hpp"
#include "surfstates/magnetic.hpp"

namespace surfids {

using namespace surfstates;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double v) { return format_number(v); }

Outcome near(double got, double want, double tol) {
  return {std::abs(got - want) <= tol, "got " + num(got) + ", expected " + num(want) + " +/- " + num(tol)};
}

Eigen::MatrixXd field(double b) {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2, 2);
  B(0, 1) = b;
  B(1, 0) = -b;
  return B;
}

SurfaceModel small_model(double b) {
  SurfaceModel m;
  m.B = field(b);
  m.parallel = solve_parallel(ExplicitSpectrumModel{{-1.5, -0.4}, 0.0}, std::nullopt, 2);
  m.mode = LongitudinalMode::injected(2);
  m.disorder = DisorderModel{{CompactShape{0.5, 1.0}, ConstantFactor{}}, CouplingLaw::uniform(0.3)};
  return m;
}

std::vector<std::pair<std::string, std::function<Outcome()>>> battery(unsigned threads) {
  std::vector<std::pair<std::string, std::function<Outcome()>>> checks;

  checks.emplace_back("landau_ladder_d2_b1", [] {
    const auto ladder = landau_ladder(MagneticStructure::from_frequencies({1.0}, 0), 5.0);
    bool ok = ladder.levels.size() == 3;
    for (std::size_t q = 0; ok && q < 3; ++q)
      ok = std::abs(ladder.levels[q].energy - 2.0 * q) < 1e-12 && ladder.levels[q].multiplicity == 1;
    return Outcome{ok, "levels " + std::to_string(ladder.levels.size())};
  });
  checks.emplace_back("free_ids_d1", [] {
    return near(free_ids(MagneticStructure::zero_field(1), 4.0), 2.0 / std::numbers::pi, 1e-14);
  });
  checks.emplace_back("free_ids_d2_b1", [] {
    return near(free_ids(MagneticStructure::from_frequencies({1.0}, 0), 3.0), 1.0 / std::numbers::pi, 1e-14);
  });
  checks.emplace_back("free_ids_left_continuous", [] {
    const auto ms = MagneticStructure::from_frequencies({1.0}, 0);
    return Outcome{free_ids(ms, 0.0) == 0.0 && free_ids(ms, 2.0) == 1.0 / (2.0 * std::numbers::pi), "at levels 0, 2"};
  });
  checks.emplace_back("karamata_d2_theta1",
                      [] { return near(karamata_coefficient(2, 1.0, 1.0), 1.0 / (8.0 * std::numbers::pi), 1e-14); });
  checks.emplace_back("rejects_non_antisymmetric", [] {
    Eigen::MatrixXd B = field(1.0);
    B(1, 0) = -0.5;
    try {
      canonicalize_field(B);
    } catch (const NotAntisymmetric& e) {
      return Outcome{e.row() == 0 && e.col() == 1, "entry (" + std::to_string(e.row()) + "," + std::to_string(e.col()) + ")"};
    }
    return Outcome{false, "accepted"};
  });
  checks.emplace_back("dirichlet_ground_d1", [] {
    const auto op = build_transverse(LatticeWindow::cube(1, 4.0, 0.01), Eigen::MatrixXd::Zero(1, 1));
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return near(ground_energy(op), pi2 / 16.0, 2e-4);
  });
  checks.emplace_back("delta_well_alpha2", [] {
    const auto par = solve_parallel(DeltaWellModel{2.0}, LatticeWindow::cube(1, 40.0, 0.01), 1);
    return near(par.eigenpairs.at(0).energy, -1.0, 1e-3);
  });
  checks.emplace_back("lifshits_fit_synthetic", [] {
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i < 40; ++i) {
      x.push_back(0.05 * std::pow(10.0, i / 39.0));
      y.push_back(std::exp(-std::pow(x.back(), -2.0)));
    }
    const auto fit = fit_lifshits(x, y, LifshitsAxis::log_lambda, 0.05, 0.5);
    return near(fit.slope, -2.0, 0.1);
  });
  checks.emplace_back("finite_volume_sandwich", [threads] {
    SurfaceExperiment exp(small_model(1.0), LatticeWindow::cube(2, 3.0, 0.25));
    EnsembleConfig cfg;
    for (double E = -1.6; E < -0.05; E += 0.15) cfg.energies.push_back(E);
    cfg.realizations = 8;
    cfg.seed = 5;
    cfg.threads = threads;
    const double M = exp.sup_potential();
    const auto H0 = exp.free_operator().matrix;
    const auto free_build = [&](std::uint64_t) { return H0; };
    const auto dis = idss_estimate(exp, cfg);
    const auto plain = summarize_counts(ensemble_counts(free_build, cfg, false), cfg.energies, 1.0, {});
    auto low = cfg;
    for (auto& E : low.energies) E -= M;
    const auto shifted = summarize_counts(ensemble_counts(free_build, low, false), cfg.energies, 1.0, {});
    const auto r = finite_volume_sandwich_check(shifted, dis, plain);
    return Outcome{r.passed() && r.checks > 0,
                   std::to_string(r.violations.size()) + " violations in " + std::to_string(r.checks)};
  });
  checks.emplace_back("projection_bound", [threads] {
    SurfaceExperiment exp(small_model(1.0), LatticeWindow::cube(2, 3.0, 0.25));
    EnsembleConfig cfg;
    cfg.realizations = 8;
    cfg.seed = 11;
    cfg.threads = threads;
    std::vector<double> lambdas;
    for (int i = 1; i <= 10; ++i) lambdas.push_back(0.1 * i);
    cfg.energies = lambdas;
    const auto reduced = reduced_ids_estimate(exp, cfg, 1, 1.0);
    for (auto& E : cfg.energies) E -= 1.5;
    const auto surface = idss_estimate(exp, cfg);
    const auto r = projection_bound_check(surface, reduced);
    return Outcome{r.passed(), std::to_string(r.violations.size()) + " violations in " + std::to_string(r.checks)};
  });
  checks.emplace_back("shift_covariance_b0", [] {
    auto model = small_model(0.0);
    const auto window = LatticeWindow::cube(2, 3.0, 0.25);
    SurfaceExperiment a(model, window);
    SurfaceExperiment b(model, window.translated({2, -1}));
    const auto Va = a.potential(3);
    const auto moved = Va->realization().shifted({2, -1});
    AlloyPotential Vm(model.disorder->profile, moved, a.halo(), model.disorder->tail_tol_rel * model.disorder->law.E0);
    const auto ea = dense_eigenvalues(a.operator_for(*Va).matrix);
    const auto eb = dense_eigenvalues(b.operator_for(Vm).matrix);
    return Outcome{(ea - eb).cwiseAbs().maxCoeff() <= 1e-8, "max diff " + num((ea - eb).cwiseAbs().maxCoeff())};
  });
  checks.emplace_back("threads_do_not_change_counts", [threads] {
    SurfaceExperiment exp(small_model(1.0), LatticeWindow::cube(2, 3.0, 0.25));
    EnsembleConfig cfg;
    cfg.energies = {-1.2, -0.8, -0.3};
    cfg.realizations = 6;
    cfg.seed = 1;
    std::ostringstream one;
    std::ostringstream many;
    write_curve_csv(one, idss_estimate(exp, cfg).curve);
    cfg.threads = std::max(2u, threads);
    write_curve_csv(many, idss_estimate(exp, cfg).curve);
    return Outcome{one.str() == many.str(), "byte comparison of curve CSV"};
  });
  return checks;
}

}  // namespace

int cmd_selftest(const std::string& out_dir, unsigned threads, std::ostream& log) {
  std::ostringstream report;
  std::size_t failures = 0;
  for (const auto& [name, check] : battery(threads)) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failures;
    report << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << '\n';
  }
  report << (failures == 0 ? "selftest passed" : "selftest failed: " + std::to_string(failures) + " checks") << '\n';
  const auto path = std::filesystem::path(out_dir) / "selftest" / "selftest.txt";
  write_file_atomic(path, report.str());
  log << report.str();
  if (failures) log << "report: " << path.string() << '\n';
  return failures == 0 ? kPass : kStudyFailure;
}

}  // namespace surfids

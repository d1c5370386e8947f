#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "surfstates/analysis.hpp"
#include "surfstates/curve_io.hpp"
#include "surfstates/error.hpp"
#include "surfstates/magnetic.hpp"

namespace surfids {

using namespace surfstates;

namespace {

std::string tag(double L) { return "L" + format_number(L); }

template <typename Writer, typename T>
std::string render(Writer write, const T& value) {
  std::ostringstream out;
  write(out, value);
  return out.str();
}

std::string curve_text(const EmpiricalCurve& curve) {
  return render([](std::ostream& o, const EmpiricalCurve& c) { write_curve_csv(o, c); }, curve);
}

std::string stats_text(const EnsembleResult& res) {
  std::ostringstream out;
  out << "E,mean,stddev,min,max,n\n";
  for (std::size_t e = 0; e < res.curve.energies.size(); ++e) {
    out << format_number(res.curve.energies[e]) << ',' << format_number(res.stats.mean[e]) << ','
        << format_number(res.stats.stddev[e]) << ',' << format_number(res.stats.min[e]) << ','
        << format_number(res.stats.max[e]) << ',' << res.stats.n << '\n';
  }
  return out.str();
}

std::vector<double> require_energies(const ExperimentConfig& c) {
  if (c.energies.values.empty()) throw Error(ErrorKind::ConfigInvalid, "numerics.energies: required for this study");
  return c.energies.values;
}

std::vector<double> require_ladder(const ExperimentConfig& c) {
  if (c.L.empty()) throw Error(ErrorKind::ConfigInvalid, "numerics.L: required for this study");
  return c.L;
}

EnsembleConfig ensemble_config(const RunContext& ctx, std::vector<double> energies) {
  EnsembleConfig cfg;
  cfg.energies = std::move(energies);
  cfg.realizations = ctx.config.realizations;
  cfg.seed = ctx.config.seed;
  cfg.counting.dense_cap = ctx.config.dense_cap;
  cfg.threads = ctx.threads;
  return cfg;
}

std::vector<double> level_energies(const ParallelSpectrum& par) {
  std::vector<double> out;
  for (const auto& p : par.eigenpairs) out.push_back(p.energy);
  return out;
}

CountingMeasure counting_measure(const ParallelSpectrum& par) {
  return CountingMeasure::from_eigenvalues(level_energies(par), par.essential_floor);
}

std::vector<double> lambda_grid(double lambda_star, int count) {
  std::vector<double> out;
  for (int i = 1; i <= count; ++i) out.push_back(lambda_star * i / count);
  return out;
}

std::vector<double> shifted(const std::vector<double>& lambdas, double base) {
  std::vector<double> out;
  for (double l : lambdas) out.push_back(base + l);
  return out;
}

GroundEdgeParams ground_params(const ExperimentConfig& c, const ParallelSpectrum& par, double M) {
  const auto levels = level_energies(par);
  if (levels.empty()) throw Error(ErrorKind::NoBoundState, "the longitudinal operator has no bound state");
  const double E2 = levels.size() > 1 ? levels[1] : par.essential_floor;
  return validate_ground_edge(M, levels[0], E2, c.sandwich.lambda_star, c.sandwich.delta);
}

InternalEdgeParams internal_params(const ExperimentConfig& c, const ParallelSpectrum& par, double M) {
  return validate_internal_edge(canonicalize_field(c.B), level_energies(par), par.essential_floor, c.sandwich.j, M,
                                c.sandwich.delta_minus, c.sandwich.lambda_star, c.sandwich.delta_plus);
}

std::string sandwich_text(const SandwichReport& r) {
  return render([](std::ostream& o, const SandwichReport& x) { write_sandwich_csv(o, x); }, r);
}

std::string integer_text(const IntegerCheckReport& r) {
  return render([](std::ostream& o, const IntegerCheckReport& x) { write_integer_check_csv(o, x); }, r);
}

std::string integer_summary(const IntegerCheckReport& r) {
  std::ostringstream out;
  out << r.kind << ": " << (r.passed() ? "PASS" : "FAIL") << " (" << r.violations.size() << " violations in "
      << r.checks << " checks)";
  return out.str();
}

}  // namespace

int cmd_free_ids(RunContext& ctx) {
  const auto& c = ctx.config;
  const auto energies = require_energies(c);
  const auto ms = canonicalize_field(c.B);
  std::optional<ParallelSpectrum> par;
  if (c.parallel) par = build_parallel(*c.parallel);

  std::ostringstream csv;
  csv << "E,N0" << (par ? ",surface" : "") << '\n';
  for (double E : energies) {
    csv << format_number(E) << ',' << format_number(free_ids(ms, E));
    if (par) {
      const double v = E < par->essential_floor ? convolve_with_counting(ms, counting_measure(*par), E) : NAN;
      csv << ',' << format_number(v);
    }
    csv << '\n';
  }
  ctx.out.table("curves", "free_ids", csv.str());

  if (ms.m > 0) {
    const double cap = c.ladder_cap.value_or(std::max(energies.back(), 0.0));
    const auto ladder = landau_ladder(ms, cap);
    std::ostringstream table;
    table << "index,energy,multiplicity\n";
    for (std::size_t q = 0; q < ladder.levels.size(); ++q) {
      table << q << ',' << format_number(ladder.levels[q].energy) << ',' << ladder.levels[q].multiplicity << '\n';
    }
    ctx.out.table("reports", "landau_ladder", table.str());
  }
  ctx.log << "free-ids: " << energies.size() << " energies written to " << ctx.out.root().string() << '\n';
  return kPass;
}

int cmd_transverse_gap(RunContext& ctx) {
  const auto& c = ctx.config;
  const auto ladder = require_ladder(c);
  std::ostringstream csv;
  csv << "L,Z,lnZ_over_L2\n";
  double previous = std::numeric_limits<double>::infinity();
  bool decreasing = true;
  for (double L : ladder) {
    const auto op = build_transverse(window_for(c, L), c.B);
    GroundEnergyOptions opts;
    opts.dense_cap = c.dense_cap;
    const double Z = ground_energy(op, opts);
    if (!(Z < previous)) decreasing = false;
    previous = Z;
    csv << format_number(L) << ',' << format_number(Z) << ',' << format_number(Z > 0.0 ? std::log(Z) / (L * L) : NAN)
        << '\n';
  }
  ctx.out.table("curves", "transverse_gap", csv.str());
  const auto report =
      ctx.out.text("reports", "transverse_gap.txt",
                    std::string("Z(C_L) strictly decreasing along the L ladder: ") + (decreasing ? "yes" : "no") + "\n");
  if (!decreasing && ladder.size() > 1) {
    ctx.log << "transverse-gap: ground energy not decreasing in L; see " << report.string() << '\n';
    return kStudyFailure;
  }
  ctx.log << "transverse-gap: " << ladder.size() << " windows\n";
  return kPass;
}

int cmd_idss(RunContext& ctx) {
  const auto& c = ctx.config;
  const auto energies = require_energies(c);
  const auto model = build_model(c);
  for (double L : require_ladder(c)) {
    SurfaceExperiment exp(model, window_for(c, L), c.max_dimension);
    const auto res = idss_estimate(exp, ensemble_config(ctx, energies));
    ctx.out.table("curves", "idss_" + tag(L), curve_text(res.curve));
    ctx.out.table("reports", "idss_stats_" + tag(L), stats_text(res));
    ctx.log << "idss: L=" << format_number(L) << " done (" << c.realizations << " realizations)\n";
  }
  return kPass;
}

int cmd_reduced_ids(RunContext& ctx) {
  const auto& c = ctx.config;
  const auto lambdas = require_energies(c);
  const auto model = build_model(c);
  if (!model.disorder) throw Error(ErrorKind::ConfigInvalid, "model.profile: reduced-ids needs a disorder profile");
  const int j = c.sandwich.j;
  for (double L : require_ladder(c)) {
    SurfaceExperiment exp(model, window_for(c, L), c.max_dimension);
    std::vector<double> scales;
    if (j == 1) {
      const auto p = ground_params(c, model.parallel, exp.sup_potential());
      scales = {1.0 - p.delta, 1.0};
    } else {
      const auto p = internal_params(c, model.parallel, exp.sup_potential());
      scales = {1.0 - p.delta_plus, 1.0, 1.0 + p.delta_minus};
    }
    for (double s : scales) {
      const auto res = reduced_ids_estimate(exp, ensemble_config(ctx, lambdas), j, s);
      ctx.out.table("curves", "reduced_j" + std::to_string(j) + "_c" + format_number(s) + "_" + tag(L),
                    curve_text(res.curve));
    }
    ctx.log << "reduced-ids: L=" << format_number(L) << " scales " << scales.size() << '\n';
  }
  return kPass;
}

int cmd_sandwich(RunContext& ctx) {
  const auto& c = ctx.config;
  const auto model = build_model(c);
  const auto ms = canonicalize_field(c.B);
  auto kinds = c.sandwich.kinds;
  if (kinds.empty()) kinds = {"global"};
  const SandwichTolerance tol{c.sandwich.stat_tol, c.sandwich.finite_size_tol};

  std::ostringstream summary;
  bool ok = true;
  for (double L : require_ladder(c)) {
    SurfaceExperiment exp(model, window_for(c, L), c.max_dimension);
    const double M = exp.sup_potential();
    const auto t = tag(L);

    // Parameter validation first, so a bad config exits before any eigenvalue work.
    std::optional<GroundEdgeParams> ground;
    std::optional<InternalEdgeParams> internal;
    for (const auto& k : kinds) {
      if (k == "ground_edge") ground = ground_params(c, model.parallel, M);
      if (k == "internal_edge") internal = internal_params(c, model.parallel, M);
    }

    for (const auto& k : kinds) {
      if (k == "global") {
        const auto res = idss_estimate(exp, ensemble_config(ctx, require_energies(c)));
        ctx.out.table("curves", "idss_" + t, curve_text(res.curve));
        const auto report = global_sandwich(res.curve, ms, counting_measure(model.parallel), M, tol);
        ctx.out.table("reports", "sandwich_global_" + t, sandwich_text(report));
        summary << t << ' ' << report.summary() << '\n';
        ok = ok && report.passed();
      } else if (k == "finite_volume") {
        const auto energies = require_energies(c);
        const auto free_op = exp.free_operator().matrix;
        const auto free_build = [&](std::uint64_t) { return free_op; };
        const auto disordered = idss_estimate(exp, ensemble_config(ctx, energies));
        const auto meta = disordered.curve.meta;
        const auto plain = summarize_counts(ensemble_counts(free_build, ensemble_config(ctx, energies), false),
                                            energies, exp.window().volume(), meta);
        const auto lowered = shifted(energies, -M);
        const auto shifted_free = summarize_counts(ensemble_counts(free_build, ensemble_config(ctx, lowered), false),
                                                   energies, exp.window().volume(), meta);
        auto report = finite_volume_sandwich_check(shifted_free, disordered, plain);
        ctx.out.table("reports", "finite_volume_" + t, integer_text(report));
        summary << t << ' ' << integer_summary(report) << '\n';
        ok = ok && report.passed();
      } else if (k == "ground_edge") {
        const auto& p = *ground;
        const auto lambdas = lambda_grid(p.lambda_star, c.sandwich.lambda_count);
        const auto nu = idss_estimate(exp, ensemble_config(ctx, shifted(lambdas, p.E1)));
        const auto reduced = reduced_ids_estimate(exp, ensemble_config(ctx, lambdas), 1, 1.0);
        const auto scaled = reduced_ids_estimate(exp, ensemble_config(ctx, lambdas), 1, 1.0 - p.delta);
        const auto report = ground_edge_sandwich(nu.curve, reduced.curve, scaled.curve, p, tol);
        ctx.out.table("curves", "ground_edge_nu_" + t, curve_text(nu.curve));
        ctx.out.table("curves", "ground_edge_reduced_" + t, curve_text(reduced.curve));
        ctx.out.table("curves", "ground_edge_scaled_" + t, curve_text(scaled.curve));
        ctx.out.table("reports", "sandwich_ground_edge_" + t, sandwich_text(report));
        const auto projection = projection_bound_check(nu, reduced);
        ctx.out.table("reports", "projection_bound_" + t, integer_text(projection));
        summary << t << ' ' << report.summary() << '\n' << t << ' ' << integer_summary(projection) << '\n';
        ok = ok && report.passed() && projection.passed();
      } else if (k == "internal_edge") {
        const auto& p = *internal;
        const auto lambdas = lambda_grid(p.lambda_star, c.sandwich.lambda_count);
        const auto above = idss_estimate(exp, ensemble_config(ctx, shifted(lambdas, p.E_j)));
        const auto at_edge = idss_estimate(exp, ensemble_config(ctx, {p.E_j}));
        const auto diff = difference_curve(above, at_edge, lambdas);
        const auto plus = reduced_ids_estimate(exp, ensemble_config(ctx, lambdas), p.j, 1.0 + p.delta_minus);
        const auto minus = reduced_ids_estimate(exp, ensemble_config(ctx, lambdas), p.j, 1.0 - p.delta_plus);
        const auto report = internal_edge_sandwich(diff, plus.curve, minus.curve, p, tol);
        ctx.out.table("curves", "internal_edge_difference_" + t, curve_text(diff));
        ctx.out.table("reports", "sandwich_internal_edge_" + t, sandwich_text(report));
        summary << t << ' ' << report.summary() << '\n';
        ok = ok && report.passed();
      }
    }
  }
  const auto path = ctx.out.text("reports", "sandwich_summary.txt", summary.str());
  ctx.log << summary.str();
  if (!ok) {
    ctx.log << "sandwich: violations found; see " << path.string() << '\n';
    return kStudyFailure;
  }
  return kPass;
}

int cmd_lifshits_fit(RunContext& ctx) {
  const auto& l = ctx.config.lifshits;
  if (l.input.empty() && l.synthetic.empty()) {
    throw Error(ErrorKind::ConfigInvalid, "study.lifshits: required for lifshits-fit");
  }
  const auto axis = l.axis == "loglog_lambda" ? LifshitsAxis::loglog_lambda : LifshitsAxis::log_lambda;
  std::vector<double> lambda;
  std::vector<double> y;
  bool empirical = false;
  if (!l.synthetic.empty()) {
    const double ratio = std::pow(l.lambda_max / l.lambda_min, 1.0 / (l.points - 1));
    for (int i = 0; i < l.points; ++i) {
      const double x = l.lambda_min * std::pow(ratio, i);
      const double base = l.synthetic == "power" ? x : std::abs(std::log(x));
      lambda.push_back(x);
      y.push_back(std::exp(-l.synthetic_constant * std::pow(base, l.synthetic_exponent)));
    }
  } else {
    const auto path = ctx.config.source_dir / l.input;
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ConfigInvalid, "study.lifshits.input: cannot read " + path.string());
    const auto curve = read_curve_csv(in);
    for (std::size_t i = 0; i < curve.energies.size(); ++i) {
      const double x = curve.energies[i] - l.edge;
      if (x > 0.0) {
        lambda.push_back(x);
        y.push_back(curve.values[i]);
      }
    }
    empirical = true;
  }
  auto fit = fit_lifshits(lambda, y, axis, l.lambda_min, l.lambda_max, l.confidence);
  fit.empirical = empirical;
  ctx.out.table("fits", "lifshits", render([](std::ostream& o, const LifshitsFit& f) { write_fit_csv(o, f); }, fit));
  ctx.out.text("fits", "lifshits_summary.txt", fit_summary(fit) + "\n");
  ctx.log << fit_summary(fit) << '\n';
  return kPass;
}

}  // namespace surfids

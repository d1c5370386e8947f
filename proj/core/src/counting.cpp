#include "surfstates/counting.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "surfstates/error.hpp"

namespace surfstates {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void require_below_floor(const std::vector<double>& energies, double floor) {
  for (double E : energies) {
    if (!(E < floor)) {
      std::ostringstream msg;
      msg << "energy " << E << " is not below the essential floor " << floor;
      throw Error(ErrorKind::AboveEssentialFloor, msg.str());
    }
  }
}

}  // namespace

// ---- counting --------------------------------------------------------------------

SpectrumCounter::SpectrumCounter(SparseHermitian H, const CountingOptions& options)
    : matrix_(std::move(H)), options_(options) {
  if (matrix_.rows() != matrix_.cols()) throw Error(ErrorKind::InvalidArgument, "matrix must be square");
  norm_ = max_row_sum_norm(matrix_);
  tie_eps_ = options_.tie_rel * norm_;
  if (static_cast<std::size_t>(matrix_.rows()) <= options_.dense_cap) {
    path_ = CountPath::dense;
    eigenvalues_ = matrix_.rows() > 0 ? dense_eigenvalues(matrix_) : Eigen::VectorXd();
  } else {
    path_ = CountPath::inertia;
    inertia_ = std::make_unique<InertiaCounter>(matrix_);
  }
}

CountResult SpectrumCounter::count(double E) {
  CountResult result;
  result.path = path_;
  const double sigma = E - tie_eps_;
  if (path_ == CountPath::dense) {
    const auto* begin = eigenvalues_.data();
    const auto* end = begin + eigenvalues_.size();
    result.count = std::lower_bound(begin, end, sigma) - begin;
    return result;
  }
  const double nudge = 10.0 * tie_eps_;
  for (int attempt : {0, -1, 1}) {
    if (auto negative = inertia_->negative_count(sigma + attempt * nudge)) {
      result.count = *negative;
      result.perturbation = attempt;
      return result;
    }
  }
  std::ostringstream msg;
  msg << "LDL factorization broke down at E = " << E << " and at E +/- " << nudge;
  throw Error(ErrorKind::FactorizationBreakdown, msg.str());
}

double SpectrumCounter::eigenvalue(std::int64_t k, double lo, double hi, double tol) {
  if (k < 0 || k >= matrix_.rows()) throw Error(ErrorKind::InvalidArgument, "eigenvalue index out of range");
  if (path_ == CountPath::dense) return eigenvalues_(static_cast<Eigen::Index>(k));
  if (count(lo).count > k || count(hi).count <= k) {
    throw Error(ErrorKind::InvalidArgument, "bisection bracket does not contain the requested eigenvalue");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (count(mid).count > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

CountResult count_below(const SparseHermitian& H, double E, const CountingOptions& options) {
  SpectrumCounter counter(H, options);
  return counter.count(E);
}

std::vector<SpectralCluster> detect_clusters(SpectrumCounter& counter, const std::vector<double>& grid,
                                             double density_fraction, double center_tol) {
  if (grid.size() < 2 || !std::is_sorted(grid.begin(), grid.end())) {
    throw Error(ErrorKind::InvalidArgument, "cluster grid must be sorted with at least two points");
  }
  std::vector<std::int64_t> c(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) c[i] = counter(grid[i]);
  std::int64_t largest = 0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) largest = std::max(largest, c[i + 1] - c[i]);

  std::vector<SpectralCluster> clusters;
  if (largest == 0) return clusters;
  const auto dense = [&](std::size_t i) {
    const auto inc = c[i + 1] - c[i];
    return inc > 0 && static_cast<double>(inc) >= density_fraction * static_cast<double>(largest);
  };
  for (std::size_t i = 0; i + 1 < grid.size();) {
    if (!dense(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < grid.size() && dense(j)) ++j;
    SpectralCluster cl;
    cl.lower = grid[i];
    cl.upper = grid[j];
    cl.count_before = c[i];
    cl.size = c[j] - c[i];
    // Bracket with the tie shift in mind: count() looks below E - tie_eps.
    const double pad = 2.0 * counter.tie_eps();
    cl.center = counter.eigenvalue(cl.count_before + cl.size / 2, cl.lower - pad, cl.upper + pad, center_tol);
    clusters.push_back(cl);
    i = j;
  }
  return clusters;
}

// ---- curves ----------------------------------------------------------------------

bool EmpiricalCurve::is_monotone() const {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[i - 1]) return false;
  }
  return true;
}

double EmpiricalCurve::at(double E) const {
  for (std::size_t i = 0; i < energies.size(); ++i) {
    if (energies[i] == E) return values[i];
  }
  throw Error(ErrorKind::InvalidArgument, "energy is not on the curve grid");
}

EnsembleResult summarize_counts(std::vector<std::vector<std::int64_t>> counts, const std::vector<double>& energies,
                                double volume, CurveMeta meta) {
  EnsembleResult out;
  const std::size_t n = counts.size();
  const std::size_t ne = energies.size();
  auto& st = out.stats;
  st.n = n;
  st.mean.assign(ne, 0.0);
  st.stddev.assign(ne, 0.0);
  st.min.assign(ne, 0.0);
  st.max.assign(ne, 0.0);
  for (std::size_t e = 0; e < ne; ++e) {
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t r = 0; r < n; ++r) {
      const double v = static_cast<double>(counts[r][e]) / volume;
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double mean = n ? sum / static_cast<double>(n) : 0.0;
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double v = static_cast<double>(counts[r][e]) / volume - mean;
      ss += v * v;
    }
    st.mean[e] = mean;
    st.stddev[e] = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    st.min[e] = n ? lo : 0.0;
    st.max[e] = n ? hi : 0.0;
  }
  out.curve.energies = energies;
  out.curve.values = st.mean;
  out.curve.std_err.resize(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    out.curve.std_err[e] = n > 0 ? st.stddev[e] / std::sqrt(static_cast<double>(n)) : 0.0;
  }
  out.curve.normalization = volume;
  meta.realizations = n;
  out.curve.meta = std::move(meta);
  out.counts = std::move(counts);
  return out;
}

// ---- experiments -----------------------------------------------------------------

std::string SurfaceModel::describe() const {
  std::ostringstream out;
  out << "d=" << B.rows() << ";parallel=" << parallel.model << ";levels=" << parallel.eigenpairs.size() << ";mode="
      << (mode.kind == LongitudinalMode::Kind::full_grid ? "full" : "injected");
  if (disorder) out << ";profile=" << disorder->profile.describe() << ";law=" << disorder->law.describe();
  return out.str();
}

std::uint64_t realization_seed(std::uint64_t seed0, std::size_t r) {
  return mix64(seed0 ^ mix64(static_cast<std::uint64_t>(r) + 0x632BE59BD9B4E019ULL));
}

SurfaceExperiment::SurfaceExperiment(SurfaceModel model, LatticeWindow window, std::size_t max_dim)
    : model_(std::move(model)), window_(std::move(window)), max_dim_(max_dim) {
  transverse_ = build_transverse(window_, model_.B);
  const std::size_t dim = assembled_dimension(transverse_, model_.parallel, model_.mode);
  if (dim > max_dim_) throw BudgetExceeded(dim, max_dim_, "assembled operator dimension");
  if (model_.disorder) {
    const auto& dm = *model_.disorder;
    const int d = window_.dimension();
    halo_ = dm.halo >= 0 ? dm.halo : choose_halo(dm.profile.shape, d, dm.law.E0, dm.tail_tol_rel * dm.law.E0);
    M_ = sup_bound(dm.profile, dm.law, d, halo_);
  }
}

std::optional<AlloyPotential> SurfaceExperiment::potential(std::uint64_t seed) const {
  if (!model_.disorder) return std::nullopt;
  const auto& dm = *model_.disorder;
  auto realization = sample_couplings(dm.law, lattice_cover(window_, halo_), seed);
  return AlloyPotential(dm.profile, std::move(realization), halo_, dm.tail_tol_rel * dm.law.E0);
}

AssembledOperator SurfaceExperiment::free_operator() const {
  return assemble(transverse_, model_.parallel, model_.mode, nullptr, max_dim_);
}

AssembledOperator SurfaceExperiment::operator_for(const AlloyPotential& V) const {
  const PotentialSample sample = V.sample(window_, model_.parallel);
  return assemble(transverse_, model_.parallel, model_.mode, &sample, max_dim_);
}

AssembledOperator SurfaceExperiment::disordered_operator(std::uint64_t seed) const {
  const auto V = potential(seed);
  if (!V) return free_operator();
  return operator_for(*V);
}

Eigen::VectorXd SurfaceExperiment::reduced_potential(std::uint64_t seed, int j) const {
  const auto V = potential(seed);
  if (!V) return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(window_.size()));
  return reduced_field(*V, reduce_site(V->profile(), model_.parallel, j), window_);
}

SparseHermitian SurfaceExperiment::reduced_operator(std::uint64_t seed, int j, double scale) const {
  const Eigen::VectorXd W = reduced_potential(seed, j);
  SparseHermitian diag(transverse_.matrix.rows(), transverse_.matrix.cols());
  std::vector<Triplet> entries;
  for (Eigen::Index p = 0; p < W.size(); ++p) {
    if (W(p) != 0.0) entries.emplace_back(p, p, Complex(scale * W(p), 0.0));
  }
  diag.setFromTriplets(entries.begin(), entries.end());
  return transverse_.matrix + diag;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<std::vector<std::int64_t>> ensemble_counts(const std::function<SparseHermitian(std::uint64_t)>& build,
                                                       const EnsembleConfig& config, bool seed_dependent) {
  const std::size_t n = config.realizations;
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "at least one realization is required");
  std::vector<std::vector<std::int64_t>> counts(n, std::vector<std::int64_t>(config.energies.size()));
  const std::size_t distinct = seed_dependent ? n : 1;
  parallel_for(distinct, config.threads, [&](std::size_t r) {
    SpectrumCounter counter(build(realization_seed(config.seed, r)), config.counting);
    for (std::size_t e = 0; e < config.energies.size(); ++e) counts[r][e] = counter(config.energies[e]);
  });
  for (std::size_t r = distinct; r < n; ++r) counts[r] = counts[0];
  return counts;
}

EnsembleResult idss_estimate(const SurfaceExperiment& experiment, const EnsembleConfig& config) {
  require_below_floor(config.energies, experiment.essential_floor());
  auto counts = ensemble_counts([&](std::uint64_t seed) { return experiment.disordered_operator(seed).matrix; },
                                config, experiment.model().disorder.has_value());
  CurveMeta meta{experiment.window().length(), experiment.window().spacing(), config.seed, 0,
                 "idss;" + experiment.model().describe()};
  return summarize_counts(std::move(counts), config.energies, experiment.window().volume(), std::move(meta));
}

EnsembleResult reduced_ids_estimate(const SurfaceExperiment& experiment, const EnsembleConfig& config, int j,
                                    double scale) {
  auto counts = ensemble_counts([&](std::uint64_t seed) { return experiment.reduced_operator(seed, j, scale); },
                                config, experiment.model().disorder.has_value());
  std::ostringstream desc;
  desc << "reduced-ids;j=" << j << ";scale=" << scale << ';' << experiment.model().describe();
  CurveMeta meta{experiment.window().length(), experiment.window().spacing(), config.seed, 0, desc.str()};
  return summarize_counts(std::move(counts), config.energies, experiment.window().volume(), std::move(meta));
}

SuperadditivityReport superadditivity_check(const SurfaceModel& model, const LatticeWindow& window,
                                            const EnsembleConfig& config, int axis) {
  const int d = window.dimension();
  if (axis < 0 || axis >= d) throw Error(ErrorKind::InvalidArgument, "split axis out of range");
  auto sides = window.sides();
  sides[axis] *= 0.5;
  auto c1 = window.center();
  auto c2 = window.center();
  c1[axis] -= 0.5 * sides[axis];
  c2[axis] += 0.5 * sides[axis];
  const SurfaceExperiment whole(model, window);
  const SurfaceExperiment first(model, LatticeWindow::box(sides, window.spacing(), c1));
  const SurfaceExperiment second(model, LatticeWindow::box(sides, window.spacing(), c2));
  const bool random = model.disorder.has_value();
  const auto cw = ensemble_counts([&](std::uint64_t s) { return whole.disordered_operator(s).matrix; }, config, random);
  const auto c1s = ensemble_counts([&](std::uint64_t s) { return first.disordered_operator(s).matrix; }, config, random);
  const auto c2s = ensemble_counts([&](std::uint64_t s) { return second.disordered_operator(s).matrix; }, config, random);

  SuperadditivityReport report;
  for (std::size_t r = 0; r < config.realizations; ++r) {
    for (std::size_t e = 0; e < config.energies.size(); ++e) {
      SuperadditivityRow row{r, config.energies[e], cw[r][e], c1s[r][e], c2s[r][e]};
      if (row.whole < row.first + row.second) ++report.violations;
      report.rows.push_back(row);
    }
  }
  return report;
}

std::vector<ConvergenceRow> convergence_study(const SurfaceModel& model, const std::vector<double>& L_ladder,
                                              double h, const EnsembleConfig& config) {
  std::vector<ConvergenceRow> rows;
  const int d = static_cast<int>(model.B.rows());
  for (double L : L_ladder) {
    const SurfaceExperiment experiment(model, LatticeWindow::cube(d, L, h));
    const auto result = idss_estimate(experiment, config);
    ConvergenceRow row{L, result.curve.values, result.curve.std_err, {}};
    if (!rows.empty()) {
      row.difference.resize(row.values.size());
      for (std::size_t e = 0; e < row.values.size(); ++e) {
        row.difference[e] = std::abs(row.values[e] - rows.back().values[e]);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace surfstates

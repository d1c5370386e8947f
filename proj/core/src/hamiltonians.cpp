#include "surfstates/hamiltonians.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "surfstates/error.hpp"
#include "surfstates/inertia.hpp"

namespace surfstates {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Dirichlet -Laplacian on the window, plus a real diagonal.
SparseHermitian grid_laplacian(const LatticeWindow& w, const Eigen::VectorXd& diagonal) {
  const int d = w.dimension();
  const double h2 = w.spacing() * w.spacing();
  const std::size_t n = w.size();
  std::vector<Triplet> entries;
  entries.reserve(n * static_cast<std::size_t>(2 * d + 1));
  std::vector<std::size_t> stride(static_cast<std::size_t>(d), 1);
  for (int a = d - 2; a >= 0; --a) stride[a] = stride[a + 1] * static_cast<std::size_t>(w.count(a + 1));
  for (std::size_t p = 0; p < n; ++p) {
    const auto idx = w.unflatten(p);
    const double diag = 2.0 * d / h2 + (diagonal.size() ? diagonal(static_cast<Eigen::Index>(p)) : 0.0);
    entries.emplace_back(p, p, Complex(diag, 0.0));
    for (int a = 0; a < d; ++a) {
      if (idx[a] + 1 < w.count(a)) {
        const std::size_t q = p + stride[a];
        entries.emplace_back(p, q, Complex(-1.0 / h2, 0.0));
        entries.emplace_back(q, p, Complex(-1.0 / h2, 0.0));
      }
    }
  }
  SparseHermitian H(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  H.setFromTriplets(entries.begin(), entries.end());
  return H;
}

double gershgorin_lower_bound(const SparseHermitian& H) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(H.rows());
  Eigen::VectorXd off = Eigen::VectorXd::Zero(H.rows());
  for (Eigen::Index k = 0; k < H.outerSize(); ++k) {
    for (SparseHermitian::InnerIterator it(H, k); it; ++it) {
      if (it.row() == it.col()) {
        diag(it.row()) += it.value().real();
      } else {
        off(it.row()) += std::abs(it.value());
      }
    }
  }
  return (diag - off).minCoeff();
}

// Deterministic, non-symmetric start vector so that no eigenspace is missed by symmetry.
Eigen::VectorXcd start_vector(Eigen::Index n) {
  Eigen::VectorXcd x(n);
  std::uint64_t state = 0x9E3779B97F4A7C15ULL;
  for (Eigen::Index i = 0; i < n; ++i) {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    x(i) = Complex(1.0 + static_cast<double>(state >> 11) * 0x1.0p-53, 0.0);
  }
  return x.normalized();
}

}  // namespace

double symmetric_gauge_potential(const Eigen::MatrixXd& B, int axis, const std::vector<double>& x) {
  double a = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) a += B(axis, static_cast<Eigen::Index>(k)) * x[k];
  return -0.5 * a;
}

TransverseOperator build_transverse(const LatticeWindow& window, const Eigen::MatrixXd& B) {
  const int d = window.dimension();
  if (B.rows() != d || B.cols() != d) {
    throw Error(ErrorKind::InvalidArgument, "field matrix dimension does not match the window");
  }
  TransverseOperator op;
  op.window = window;
  op.B = B;
  op.field = canonicalize_field(B);
  const double h = window.spacing();
  const double h2 = h * h;
  op.max_plaquette_flux = B.cwiseAbs().maxCoeff() * h2;
  if (op.max_plaquette_flux > kFluxLimit) {
    std::ostringstream msg;
    msg << "plaquette flux " << op.max_plaquette_flux << " exceeds " << kFluxLimit;
    throw Error(ErrorKind::FluxTooLarge, msg.str());
  }
  op.flux_warning = op.max_plaquette_flux > kFluxWarning;

  const std::size_t n = window.size();
  std::vector<std::size_t> stride(static_cast<std::size_t>(d), 1);
  for (int a = d - 2; a >= 0; --a) stride[a] = stride[a + 1] * static_cast<std::size_t>(window.count(a + 1));

  std::vector<Triplet> entries;
  entries.reserve(n * static_cast<std::size_t>(2 * d + 1));
  const double diag = 2.0 * d / h2 - op.field.beta;
  std::vector<double> mid(static_cast<std::size_t>(d));
  for (std::size_t p = 0; p < n; ++p) {
    const auto idx = window.unflatten(p);
    entries.emplace_back(p, p, Complex(diag, 0.0));
    for (int a = 0; a < d; ++a) {
      if (idx[a] + 1 >= window.count(a)) continue;
      for (int k = 0; k < d; ++k) mid[k] = window.coordinate(k, idx[k]);
      mid[a] += 0.5 * h;
      const double theta = h * symmetric_gauge_potential(B, a, mid);
      const Complex hop = -std::polar(1.0, -theta) / h2;
      const std::size_t q = p + stride[a];
      entries.emplace_back(p, q, hop);
      entries.emplace_back(q, p, std::conj(hop));
    }
  }
  op.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  op.matrix.setFromTriplets(entries.begin(), entries.end());
  return op;
}

double ground_energy(const SparseHermitian& H, const GroundEnergyOptions& options) {
  const Eigen::Index n = H.rows();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "empty matrix");
  if (static_cast<std::size_t>(n) <= options.dense_cap) return dense_eigenvalues(H)(0);

  InertiaCounter counter(H);
  const double scale = std::max(1.0, counter.norm());
  auto count_at = [&](double sigma) -> std::optional<std::int64_t> {
    for (double nudge : {0.0, 1e-11, -1e-11}) {
      if (auto c = counter.negative_count(sigma + nudge * scale)) return c;
    }
    return std::nullopt;
  };

  // Invariant: count(lower) == 0, so lower <= E_0 <= rq. Inverse iteration runs with the
  // shift at `lower`, which is raised towards the Rayleigh quotient whenever a count certifies it.
  double lower = gershgorin_lower_bound(H) - 1e-8 * scale;
  auto c0 = count_at(lower);
  if (!c0 || *c0 != 0) throw Error(ErrorKind::SolverFailure, "cannot factor below the spectrum");

  Eigen::VectorXcd x = start_vector(n);
  double rq = std::numeric_limits<double>::infinity();
  double residual = std::numeric_limits<double>::infinity();
  const double tol = options.rel_tol * scale;
  for (int it = 0; it < options.max_iterations; ++it) {
    for (int inner = 0; inner < 2; ++inner) {
      x = counter.solve(x);
      const double nx = x.norm();
      if (!std::isfinite(nx) || nx == 0.0) throw Error(ErrorKind::SolverFailure, "inverse iteration diverged");
      x /= nx;
    }
    const Eigen::VectorXcd Hx = H * x;
    rq = std::min(rq, x.dot(Hx).real());
    residual = (Hx - x.dot(Hx).real() * x).norm();
    if (rq - lower <= tol) return 0.5 * (lower + rq);

    // A converged vector inside a nearly degenerate cluster stops improving; finish by bisection.
    if (residual <= tol) break;

    // Try to move the shift up; halve the step until the count certifies it.
    double candidate = std::max(lower, rq - 2.0 * residual - tol);
    if (candidate <= lower) candidate = 0.5 * (lower + rq);
    bool moved = false;
    for (int tries = 0; tries < 60 && candidate > lower; ++tries) {
      const auto c = count_at(candidate);
      if (c && *c == 0) {
        lower = candidate;
        moved = true;
        break;
      }
      candidate = 0.5 * (lower + candidate);
    }
    if (!moved) count_at(lower);  // keep the factorization at the certified shift
  }

  double upper = rq;
  for (int it = 0; it < 200 && upper - lower > tol; ++it) {
    const double mid = 0.5 * (lower + upper);
    const auto c = count_at(mid);
    if (!c) throw Error(ErrorKind::SolverFailure, "inertia factorization broke down during bisection");
    (*c == 0 ? lower : upper) = mid;
  }
  if (upper - lower > tol) {
    std::ostringstream msg;
    msg << "ground state bracket [" << lower << ", " << upper << "] did not close, residual " << residual;
    throw Error(ErrorKind::SolverFailure, msg.str());
  }
  return 0.5 * (lower + upper);
}

double ground_energy(const TransverseOperator& op, const GroundEnergyOptions& options) {
  return ground_energy(op.matrix, options);
}

// ---- longitudinal ----------------------------------------------------------

std::vector<double> ParallelSpectrum::energies() const {
  std::vector<double> e;
  e.reserve(eigenpairs.size());
  for (const auto& pair : eigenpairs) e.push_back(pair.energy);
  return e;
}

bool ParallelSpectrum::has_vectors() const {
  return !eigenpairs.empty() &&
         std::all_of(eigenpairs.begin(), eigenpairs.end(), [](const auto& p) { return p.psi.size() > 0; });
}

CountingMeasure ParallelSpectrum::counting_measure() const {
  return CountingMeasure::from_eigenvalues(energies(), essential_floor);
}

double ParallelSpectrum::cell_volume() const {
  if (!grid) return 1.0;
  return std::pow(grid->spacing(), grid->dimension());
}

double suggested_half_width(double E1) {
  if (!(E1 < 0.0)) throw Error(ErrorKind::InvalidArgument, "bound state energy must be negative");
  return std::log(1e6) / std::sqrt(-E1);
}

namespace {

void fix_sign(Eigen::VectorXd& psi) {
  Eigen::Index arg = 0;
  psi.cwiseAbs().maxCoeff(&arg);
  if (psi(arg) < 0.0) psi = -psi;
}

// Lowest `count` eigenpairs of a real symmetric tridiagonal matrix below `floor`.
std::vector<ParallelEigenpair> tridiagonal_pairs(const Eigen::VectorXd& diag, const Eigen::VectorXd& off,
                                                 int count, double floor, double cell) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::SolverFailure, "tridiagonal eigensolver failed");
  const Eigen::VectorXd ev = solver.eigenvalues();
  const Eigen::Index n = diag.size();

  SparseHermitian T(n, n);
  std::vector<Triplet> entries;
  for (Eigen::Index i = 0; i < n; ++i) {
    entries.emplace_back(i, i, Complex(diag(i), 0.0));
    if (i + 1 < n) {
      entries.emplace_back(i, i + 1, Complex(off(i), 0.0));
      entries.emplace_back(i + 1, i, Complex(off(i), 0.0));
    }
  }
  T.setFromTriplets(entries.begin(), entries.end());
  InertiaCounter factor(T);
  const double scale = std::max(1.0, factor.norm());

  std::vector<ParallelEigenpair> pairs;
  for (Eigen::Index k = 0; k < n && static_cast<int>(pairs.size()) < count; ++k) {
    if (!(ev(k) < floor)) break;
    double sigma = ev(k) - 1e-10 * scale;
    if (!factor.negative_count(sigma)) {
      sigma = ev(k) + 1e-10 * scale;
      if (!factor.negative_count(sigma)) throw Error(ErrorKind::SolverFailure, "inverse iteration shift failed");
    }
    Eigen::VectorXcd x = start_vector(n);
    for (int it = 0; it < 4; ++it) {
      x = factor.solve(x);
      for (const auto& prev : pairs) x -= prev.psi.cast<Complex>().dot(x) * prev.psi.cast<Complex>() * cell;
      x /= std::sqrt(x.squaredNorm() * cell);
    }
    ParallelEigenpair pair;
    pair.psi = x.real();
    pair.psi /= std::sqrt(pair.psi.squaredNorm() * cell);
    fix_sign(pair.psi);
    const Eigen::VectorXd Tpsi = T.real() * pair.psi;
    pair.energy = pair.psi.dot(Tpsi) * cell;
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

}  // namespace

ParallelSpectrum solve_parallel(const ParallelModel& model, const std::optional<LatticeWindow>& grid, int count,
                                std::size_t dense_cap) {
  if (count < 1) throw Error(ErrorKind::InvalidArgument, "requested eigenpair count must be positive");
  ParallelSpectrum spec;

  if (const auto* explicit_model = std::get_if<ExplicitSpectrumModel>(&model)) {
    std::vector<double> e = explicit_model->energies;
    std::sort(e.begin(), e.end());
    spec.essential_floor = explicit_model->essential_floor;
    spec.model = "explicit";
    for (double energy : e) {
      if (!(energy < spec.essential_floor)) continue;
      if (static_cast<int>(spec.eigenpairs.size()) == count) break;
      spec.eigenpairs.push_back({energy, Eigen::VectorXd()});
    }
    if (spec.eigenpairs.empty()) throw Error(ErrorKind::NoBoundState, "no listed energy lies below the floor");
    spec.too_few_states = static_cast<int>(spec.eigenpairs.size()) < count;
    return spec;
  }

  if (!grid) throw Error(ErrorKind::InvalidArgument, "grid models need a longitudinal window");
  const LatticeWindow& w = *grid;
  const double h = w.spacing();
  const double cell = std::pow(h, w.dimension());
  Eigen::VectorXd potential = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(w.size()));

  std::visit(overloaded{
                 [&](const GridPotentialModel& m) {
                   for (std::size_t q = 0; q < w.size(); ++q) potential(static_cast<Eigen::Index>(q)) = m.u(w.point(q));
                   spec.essential_floor = m.confining ? std::numeric_limits<double>::infinity() : 0.0;
                   spec.model = m.name;
                 },
                 [&](const DeltaWellModel& m) {
                   if (w.dimension() != 1) throw Error(ErrorKind::InvalidArgument, "delta well is one-dimensional");
                   if (!(m.alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "delta well needs alpha > 0");
                   const double fraction = (0.0 - w.corner(0)) / h - 1.0;
                   const double site = std::round(fraction);
                   if (std::abs(fraction - site) > 1e-9 || site < 0 || site >= w.count(0)) {
                     throw Error(ErrorKind::InvalidArgument, "y = 0 must be an interior grid point");
                   }
                   potential(static_cast<Eigen::Index>(site)) = -m.alpha / h;
                   spec.essential_floor = 0.0;
                   std::ostringstream name;
                   name << "delta(alpha=" << m.alpha << ")";
                   spec.model = name.str();
                 },
                 [](const ExplicitSpectrumModel&) {},
             },
             model);

  spec.grid = w;
  spec.grid_operator = grid_laplacian(w, potential);

  if (w.dimension() == 1) {
    const Eigen::Index n = static_cast<Eigen::Index>(w.size());
    Eigen::VectorXd diag = potential.array() + 2.0 / (h * h);
    Eigen::VectorXd off = Eigen::VectorXd::Constant(std::max<Eigen::Index>(n - 1, 0), -1.0 / (h * h));
    spec.eigenpairs = tridiagonal_pairs(diag, off, count, spec.essential_floor, cell);
  } else {
    if (w.size() > dense_cap) throw BudgetExceeded(w.size(), dense_cap, "dense longitudinal eigensolve");
    const auto [values, vectors] = lowest_eigenpairs(Eigen::MatrixXcd(spec.grid_operator).real(), count);
    for (Eigen::Index k = 0; k < values.size(); ++k) {
      if (!(values(k) < spec.essential_floor)) break;
      ParallelEigenpair pair{values(k), vectors.col(k) / std::sqrt(cell)};
      fix_sign(pair.psi);
      spec.eigenpairs.push_back(std::move(pair));
    }
  }
  if (spec.eigenpairs.empty()) throw Error(ErrorKind::NoBoundState, "no eigenvalue below the essential floor");
  spec.too_few_states = static_cast<int>(spec.eigenpairs.size()) < count;
  return spec;
}

// ---- assembly --------------------------------------------------------------

PotentialSample PotentialSample::y_independent(Eigen::VectorXd A) {
  PotentialSample s;
  s.transverse = std::move(A);
  return s;
}

PotentialSample PotentialSample::separable(Eigen::VectorXd A, Eigen::VectorXd g) {
  PotentialSample s;
  s.transverse = std::move(A);
  s.longitudinal = std::move(g);
  return s;
}

PotentialSample PotentialSample::tabulated(Eigen::VectorXd values) {
  PotentialSample s;
  s.product = std::move(values);
  return s;
}

Eigen::MatrixXd longitudinal_couplings(const ParallelSpectrum& par, int levels, const Eigen::VectorXd& g) {
  if (g.size() == 0) return Eigen::MatrixXd::Identity(levels, levels);
  if (!par.has_vectors()) {
    throw Error(ErrorKind::InvalidArgument, "y-dependent potentials need longitudinal eigenvectors");
  }
  Eigen::MatrixXd G(levels, levels);
  const double cell = par.cell_volume();
  for (int j = 0; j < levels; ++j) {
    for (int k = 0; k <= j; ++k) {
      const auto& pj = par.eigenpairs[j].psi;
      const auto& pk = par.eigenpairs[k].psi;
      G(j, k) = G(k, j) = (g.array() * pj.array() * pk.array()).sum() * cell;
    }
  }
  return G;
}

std::size_t assembled_dimension(const TransverseOperator& op, const ParallelSpectrum& par,
                                const LongitudinalMode& mode) {
  const std::size_t npar = mode.kind == LongitudinalMode::Kind::full_grid
                               ? static_cast<std::size_t>(par.grid_operator.rows())
                               : static_cast<std::size_t>(mode.levels);
  return op.window.size() * npar;
}

AssembledOperator assemble(const TransverseOperator& op, const ParallelSpectrum& par, const LongitudinalMode& mode,
                           const PotentialSample* V, std::size_t max_dim) {
  AssembledOperator out;
  out.mode = mode;
  out.transverse_size = op.window.size();
  const bool full = mode.kind == LongitudinalMode::Kind::full_grid;
  if (full) {
    if (par.grid_operator.rows() == 0) throw Error(ErrorKind::InvalidArgument, "full-grid mode needs a grid operator");
    out.longitudinal_size = static_cast<std::size_t>(par.grid_operator.rows());
  } else {
    if (mode.levels < 1 || mode.levels > static_cast<int>(par.eigenpairs.size())) {
      throw Error(ErrorKind::InvalidArgument, "injected level count exceeds the available eigenpairs");
    }
    out.longitudinal_size = static_cast<std::size_t>(mode.levels);
  }
  const std::size_t dim = out.transverse_size * out.longitudinal_size;
  if (dim > max_dim) throw BudgetExceeded(dim, max_dim, "assembled operator dimension");

  const auto np = static_cast<Eigen::Index>(out.transverse_size);
  const auto nq = static_cast<Eigen::Index>(out.longitudinal_size);
  if (V) {
    if (V->product.size() > 0) {
      if (V->product.size() != np * (full ? nq : static_cast<Eigen::Index>(par.grid ? par.grid->size() : 0))) {
        throw Error(ErrorKind::InvalidArgument, "tabulated potential has the wrong size");
      }
    } else if (V->transverse.size() != np) {
      throw Error(ErrorKind::InvalidArgument, "transverse potential has the wrong size");
    }
  }

  SparseHermitian longitudinal;
  if (full) {
    longitudinal = par.grid_operator;
  } else {
    longitudinal.resize(nq, nq);
    std::vector<Triplet> diag;
    for (Eigen::Index j = 0; j < nq; ++j) diag.emplace_back(j, j, Complex(par.eigenpairs[j].energy, 0.0));
    longitudinal.setFromTriplets(diag.begin(), diag.end());
  }
  out.matrix = kronecker_sum(op.matrix, longitudinal);
  if (!V) return out;

  std::vector<Triplet> extra;
  if (full) {
    extra.reserve(static_cast<std::size_t>(dim));
    for (Eigen::Index p = 0; p < np; ++p) {
      for (Eigen::Index q = 0; q < nq; ++q) {
        double v;
        if (V->product.size() > 0) {
          v = V->product(p * nq + q);
        } else {
          v = V->transverse(p) * (V->longitudinal.size() ? V->longitudinal(q) : 1.0);
        }
        if (v != 0.0) extra.emplace_back(p * nq + q, p * nq + q, Complex(v, 0.0));
      }
    }
  } else if (V->product.size() > 0) {
    if (!par.has_vectors()) throw Error(ErrorKind::InvalidArgument, "tabulated potentials need eigenvectors");
    const Eigen::Index ng = static_cast<Eigen::Index>(par.grid->size());
    const double cell = par.cell_volume();
    for (Eigen::Index p = 0; p < np; ++p) {
      const Eigen::VectorXd slice = V->product.segment(p * ng, ng);
      for (Eigen::Index j = 0; j < nq; ++j) {
        for (Eigen::Index k = 0; k < nq; ++k) {
          const double v = (slice.array() * par.eigenpairs[j].psi.array() * par.eigenpairs[k].psi.array()).sum() * cell;
          if (v != 0.0) extra.emplace_back(p * nq + j, p * nq + k, Complex(v, 0.0));
        }
      }
    }
  } else {
    const Eigen::MatrixXd G = longitudinal_couplings(par, static_cast<int>(nq), V->longitudinal);
    for (Eigen::Index p = 0; p < np; ++p) {
      const double a = V->transverse(p);
      if (a == 0.0) continue;
      for (Eigen::Index j = 0; j < nq; ++j) {
        for (Eigen::Index k = 0; k < nq; ++k) {
          if (G(j, k) != 0.0) extra.emplace_back(p * nq + j, p * nq + k, Complex(a * G(j, k), 0.0));
        }
      }
    }
  }
  SparseHermitian potential(out.matrix.rows(), out.matrix.cols());
  potential.setFromTriplets(extra.begin(), extra.end());
  out.matrix += potential;
  return out;
}

// ---- translations ----------------------------------------------------------

MagneticTranslation magnetic_translate(const TransverseOperator& op, const std::vector<std::int64_t>& xi) {
  if (!is_canonical_block_form(op.B)) {
    throw Error(ErrorKind::BadParameters, "magnetic translations need B in canonical block form");
  }
  const int d = op.window.dimension();
  if (static_cast<int>(xi.size()) != d) throw Error(ErrorKind::InvalidArgument, "shift has the wrong dimension");
  MagneticTranslation t;
  t.shift = xi;
  t.target = op.window.translated(xi);
  const std::size_t n = t.target.size();
  t.phases.resize(static_cast<Eigen::Index>(n));
  for (std::size_t p = 0; p < n; ++p) {
    const auto x = t.target.point(p);
    double angle = 0.0;
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) angle += static_cast<double>(xi[j]) * op.B(j, k) * x[k];
    }
    t.phases(static_cast<Eigen::Index>(p)) = std::polar(1.0, -0.5 * angle);
  }
  return t;
}

SparseHermitian conjugate_by_phases(const SparseHermitian& H, const Eigen::VectorXcd& phases) {
  SparseHermitian out = H;
  for (Eigen::Index k = 0; k < out.outerSize(); ++k) {
    for (SparseHermitian::InnerIterator it(out, k); it; ++it) {
      it.valueRef() = phases(it.row()) * it.value() * std::conj(phases(it.col()));
    }
  }
  return out;
}

}  // namespace surfstates

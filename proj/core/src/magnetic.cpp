#include "surfstates/magnetic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "surfstates/error.hpp"
#include "surfstates/special_functions.hpp"

namespace surfstates {

double MagneticStructure::flux_product() const {
  return std::accumulate(b.begin(), b.end(), 1.0, std::multiplies<>());
}

MagneticStructure MagneticStructure::zero_field(int d) {
  MagneticStructure ms;
  ms.n = d;
  return ms;
}

MagneticStructure MagneticStructure::from_frequencies(std::vector<double> b, int n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative kernel dimension");
  for (double bj : b) {
    if (!(bj > 0.0)) throw Error(ErrorKind::InvalidArgument, "field frequencies must be positive");
  }
  std::sort(b.begin(), b.end(), std::greater<>());
  MagneticStructure ms;
  ms.m = static_cast<int>(b.size());
  ms.n = n;
  ms.beta = std::accumulate(b.begin(), b.end(), 0.0);
  ms.b = std::move(b);
  return ms;
}

CountingMeasure CountingMeasure::from_eigenvalues(std::vector<double> eigenvalues,
                                                  double essential_floor, double merge_tol) {
  std::sort(eigenvalues.begin(), eigenvalues.end());
  CountingMeasure rho;
  rho.essential_floor = essential_floor;
  for (double e : eigenvalues) {
    if (!(e < essential_floor)) {
      throw Error(ErrorKind::InvalidArgument, "eigenvalue at or above the essential floor");
    }
    if (!rho.jumps.empty() && e - rho.jumps.back().energy <= merge_tol) {
      ++rho.jumps.back().weight;
    } else {
      rho.jumps.push_back({e, 1});
    }
  }
  return rho;
}

std::int64_t CountingMeasure::count_below(double E) const {
  std::int64_t total = 0;
  for (const auto& jump : jumps) {
    if (jump.energy < E) total += jump.weight;
  }
  return total;
}

MagneticStructure canonicalize_field(const Eigen::MatrixXd& B, double tol_rel) {
  if (B.rows() != B.cols() || B.rows() == 0) {
    throw Error(ErrorKind::InvalidArgument, "field matrix must be square and non-empty");
  }
  const int d = static_cast<int>(B.rows());
  const double scale = B.cwiseAbs().maxCoeff();
  const double tol = tol_rel * std::max(scale, std::numeric_limits<double>::min());
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const double asym = B(i, j) + B(j, i);
      if (std::abs(asym) > tol) throw NotAntisymmetric(i, j, asym);
    }
  }
  if (scale == 0.0) return MagneticStructure::zero_field(d);

  // iB is Hermitian with spectrum {±b_j} ∪ {0}^n.
  const Eigen::MatrixXcd iB = std::complex<double>(0.0, 1.0) * B.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(iB, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = solver.eigenvalues();
  const double zero_tol = 1e-10 * scale;
  std::vector<double> positive;
  for (int k = 0; k < d; ++k) {
    if (ev(k) > zero_tol) positive.push_back(ev(k));
  }
  const int m = static_cast<int>(positive.size());
  return MagneticStructure::from_frequencies(std::move(positive), d - 2 * m);
}

Eigen::MatrixXd canonical_field_matrix(const MagneticStructure& ms) {
  const int d = ms.dimension();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < ms.m; ++j) {
    B(2 * j, 2 * j + 1) = ms.b[j];
    B(2 * j + 1, 2 * j) = -ms.b[j];
  }
  return B;
}

bool is_canonical_block_form(const Eigen::MatrixXd& B, double tol) {
  if (B.rows() != B.cols()) return false;
  const int d = static_cast<int>(B.rows());
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const bool in_block = (i / 2 == j / 2) && (i != j) && (std::max(i, j) < d);
      if (!in_block && std::abs(B(i, j)) > tol) return false;
    }
  }
  for (int i = 0; i + 1 < d; i += 2) {
    if (std::abs(B(i, i + 1) + B(i + 1, i)) > tol) return false;
  }
  return true;
}

double landau_merge_tolerance(const MagneticStructure& ms) {
  return 1e-9 * std::max(1.0, ms.b.empty() ? 1.0 : ms.b.front());
}

LandauLadder landau_ladder(const MagneticStructure& ms, double cap, std::size_t budget) {
  if (ms.m == 0) throw Error(ErrorKind::ZeroField, "Landau ladder needs at least one nonzero b_j");
  if (!(cap >= 0.0) || !std::isfinite(cap)) {
    throw Error(ErrorKind::InvalidArgument, "ladder cap must be finite and non-negative");
  }
  const double tol = landau_merge_tolerance(ms);

  // Estimated lattice-point count: volume of the simplex sum 2 b_j l_j <= cap.
  double estimate = 1.0;
  for (int j = 0; j < ms.m; ++j) estimate *= (cap / (2.0 * ms.b[j]) + 1.0) / (j + 1);
  if (estimate > static_cast<double>(budget)) {
    throw BudgetExceeded(static_cast<std::size_t>(std::min(estimate, 1e18)), budget,
                         "Landau ladder enumeration");
  }

  std::vector<double> sums;
  std::function<void(int, double)> enumerate = [&](int j, double partial) {
    if (j == ms.m) {
      sums.push_back(partial);
      if (sums.size() > budget) throw BudgetExceeded(sums.size(), budget, "Landau ladder enumeration");
      return;
    }
    for (std::int64_t l = 0;; ++l) {
      const double value = partial + 2.0 * ms.b[j] * static_cast<double>(l);
      if (value > cap + tol) break;
      enumerate(j + 1, value);
    }
  };
  try {
    enumerate(0, 0.0);
  } catch (const BudgetExceeded& e) {
    throw Error(ErrorKind::CapTooLarge, e.what());
  }
  std::sort(sums.begin(), sums.end());

  LandauLadder ladder;
  ladder.cap = cap;
  for (double s : sums) {
    if (!ladder.levels.empty() && s - ladder.levels.back().energy <= tol) {
      ++ladder.levels.back().multiplicity;
    } else {
      ladder.levels.push_back({s, 1});
    }
  }
  return ladder;
}

namespace {

// Sum over l in Z_+^m of f(E - 2 sum b_j l_j) restricted to positive arguments.
double landau_sum(const MagneticStructure& ms, double E, const std::function<double(double)>& f,
                  bool step_only) {
  std::function<double(int, double)> recurse = [&](int j, double remaining) -> double {
    if (!(remaining > 0.0)) return 0.0;
    const double spacing = 2.0 * ms.b[j];
    if (j == ms.m - 1 && step_only) {
      // Number of l >= 0 with spacing * l < remaining.
      double k = std::floor(remaining / spacing);
      if (spacing * k < remaining) k += 1.0;
      return k;
    }
    double total = 0.0;
    for (std::int64_t l = 0;; ++l) {
      const double r = remaining - spacing * static_cast<double>(l);
      if (!(r > 0.0)) break;
      total += (j == ms.m - 1) ? f(r) : recurse(j + 1, r);
    }
    return total;
  };
  return recurse(0, E);
}

}  // namespace

double free_ids(const MagneticStructure& ms, double E) {
  if (!(E > 0.0)) return 0.0;
  const double two_pi = 2.0 * std::numbers::pi;
  if (ms.m == 0) {
    const int d = ms.n;
    return unit_ball_volume(d) / std::pow(two_pi, d) * std::pow(E, 0.5 * d);
  }
  const double prefactor = ms.flux_product() / std::pow(two_pi, ms.m);
  if (ms.n == 0) {
    return prefactor * landau_sum(ms, E, nullptr, true);
  }
  const double half_n = 0.5 * ms.n;
  const double transverse = unit_ball_volume(ms.n) / std::pow(two_pi, ms.n);
  return prefactor * transverse *
         landau_sum(ms, E, [half_n](double r) { return std::pow(r, half_n); }, false);
}

double semiclassical_coefficient(int d) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
  return unit_ball_volume(d) / std::pow(2.0 * std::numbers::pi, d);
}

double convolve_with_counting(const MagneticStructure& ms, const CountingMeasure& rho, double E) {
  if (!(E < rho.essential_floor)) {
    std::ostringstream msg;
    msg << "E = " << E << " is not below the essential floor " << rho.essential_floor;
    throw Error(ErrorKind::AboveEssentialFloor, msg.str());
  }
  double total = 0.0;
  for (const auto& jump : rho.jumps) {
    if (jump.energy < E) total += static_cast<double>(jump.weight) * free_ids(ms, E - jump.energy);
  }
  return total;
}

double karamata_coefficient(int d, double theta, double C) {
  if (d < 1 || !(theta > 0.0) || !(C > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "karamata_coefficient needs d >= 1, theta > 0, C > 0");
  }
  return C * (d * theta / (d + 2.0 * theta)) * beta(0.5 * d, theta) * semiclassical_coefficient(d);
}

}  // namespace surfstates

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "surfstates/hamiltonians.hpp"
#include "surfstates/lattice.hpp"

namespace surfstates {

// ---- single-site profiles ----------------------------------------------------

/// a(x) = amplitude (1 + |x|)^{-kappa}, kappa > d.
struct PowerLawShape {
  double kappa = 0.0;
  double amplitude = 1.0;
};

/// a(x) = amplitude exp(-rate |x|^exponent).
struct GaussianClassShape {
  double exponent = 2.0;
  double rate = 1.0;
  double amplitude = 1.0;
};

/// a(x) = amplitude on the half-open cube [-w, w)^d, zero elsewhere.
struct CompactShape {
  double half_width = 0.5;
  double amplitude = 1.0;
};

using TransverseShape = std::variant<PowerLawShape, GaussianClassShape, CompactShape>;

struct ConstantFactor {};
/// g(y) = 1 on the closed box |y_a| <= half_width.
struct IndicatorFactor {
  double half_width = 1.0;
};
using LongitudinalFactor = std::variant<ConstantFactor, IndicatorFactor>;

/// v(x, y) = a(x) g(y).
struct SingleSiteProfile {
  TransverseShape shape;
  LongitudinalFactor factor = ConstantFactor{};

  double transverse(const std::vector<double>& x) const;
  double longitudinal(const std::vector<double>& y) const;
  double value(const std::vector<double>& x, const std::vector<double>& y) const;
  bool y_independent() const { return std::holds_alternative<ConstantFactor>(factor); }
  std::string describe() const;
};

/// Radial envelope of the shape (as a function of |x|, compact uses the sup-norm radius).
double shape_envelope(const TransverseShape& shape, double r);

// ---- coupling law ------------------------------------------------------------

/// F(E) = (E / E0)^kappa on [0, E0]; kappa = 1 is the uniform law.
struct CouplingLaw {
  enum class Kind { uniform, power };
  Kind kind = Kind::uniform;
  double E0 = 1.0;
  double kappa = 1.0;

  static CouplingLaw uniform(double E0);
  static CouplingLaw power(double kappa, double E0);

  double exponent() const { return kind == Kind::uniform ? 1.0 : kappa; }
  double cdf(double E) const;
  double inverse_cdf(double u) const;
  std::string describe() const;
};

// ---- realizations ------------------------------------------------------------

/// Integer box lo[a] <= xi_a <= hi[a].
struct LatticeBox {
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> hi;

  int dimension() const { return static_cast<int>(lo.size()); }
  std::size_t size() const;
  bool contains(const std::vector<std::int64_t>& xi) const;
  std::size_t flatten(const std::vector<std::int64_t>& xi) const;
  std::vector<std::int64_t> site(std::size_t flat) const;
  LatticeBox translated(const std::vector<std::int64_t>& shift) const;
};

/// Sites within sup-distance `halo` of the closed window.
LatticeBox lattice_cover(const LatticeWindow& window, int halo);

/// Uniform variate in [0, 1) that depends only on (seed, key).
double keyed_uniform(std::uint64_t seed, const std::vector<std::int64_t>& key);

/// lambda at lattice key, a pure function of (law, seed, key).
double coupling_value(const CouplingLaw& law, std::uint64_t seed, const std::vector<std::int64_t>& key);

/// Seeded couplings on a lattice box. The value at site xi is drawn with key xi - key_shift,
/// so `shifted(s)` relabels sites without resampling.
class DisorderRealization {
 public:
  DisorderRealization() = default;
  DisorderRealization(CouplingLaw law, LatticeBox box, std::uint64_t seed,
                      std::vector<std::int64_t> key_shift = {});

  static DisorderRealization constant(const LatticeBox& box, double value, double E0);

  const CouplingLaw& law() const { return law_; }
  const LatticeBox& box() const { return box_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<std::int64_t>& key_shift() const { return key_shift_; }
  const std::vector<double>& values() const { return values_; }

  double value(const std::vector<std::int64_t>& xi) const;
  double value_at(std::size_t flat) const { return values_[flat]; }

  /// Realization with lambda'_eta = lambda_{eta - shift} on the translated box.
  DisorderRealization shifted(const std::vector<std::int64_t>& shift) const;

  /// Key-value manifest (values are regenerated, never stored).
  std::string manifest() const;

 private:
  CouplingLaw law_;
  LatticeBox box_;
  std::uint64_t seed_ = 0;
  std::vector<std::int64_t> key_shift_;
  std::vector<double> values_;
};

DisorderRealization sample_couplings(const CouplingLaw& law, const LatticeBox& box, std::uint64_t seed);

// ---- lattice sums ------------------------------------------------------------

/// Upper bound on sum_{|x - xi|_inf > R} a(x - xi) over all x.
double tail_bound(const TransverseShape& shape, int d, int R);

/// Smallest R >= 0 with E0 * tail_bound <= tail_tol (capped by max_halo).
int choose_halo(const TransverseShape& shape, int d, double E0, double tail_tol, int max_halo = 100000);

/// Truncated alloy sum V(x, y) = sum_xi lambda_xi a(x - xi) g(y) over |x - xi|_inf <= halo.
class AlloyPotential {
 public:
  AlloyPotential(SingleSiteProfile profile, DisorderRealization realization, int halo, double tail_tol);

  const SingleSiteProfile& profile() const { return profile_; }
  const DisorderRealization& realization() const { return realization_; }
  int halo() const { return halo_; }

  double transverse_value(const std::vector<double>& x) const;
  double value(const std::vector<double>& x, const std::vector<double>& y) const;

  /// A(p) on every point of the window; throws HaloTooSmall when the cover is insufficient.
  Eigen::VectorXd transverse_field(const LatticeWindow& window) const;
  PotentialSample sample(const LatticeWindow& window, const ParallelSpectrum& par) const;

 private:
  SingleSiteProfile profile_;
  DisorderRealization realization_;
  int halo_;
  double tail_tol_;
};

// ---- reduced potentials -------------------------------------------------------

/// w_j(x) = weight * a(x), weight = sum_y g(y) psi_j(y)^2 h^l.
struct ReducedProfile {
  int j = 1;
  TransverseShape shape;
  double weight = 1.0;

  double value(const std::vector<double>& x) const;
};

ReducedProfile reduce_site(const SingleSiteProfile& profile, const ParallelSpectrum& par, int j);

/// W_j(x) = sum_xi lambda_xi w_j(x - xi) on the window grid.
Eigen::VectorXd reduced_field(const AlloyPotential& V, const ReducedProfile& w, const LatticeWindow& window);
double reduced_field_at(const AlloyPotential& V, const ReducedProfile& w, const std::vector<double>& x);

/// Reduces a tabulated product sample: W(p) = sum_q V(p, q) psi_j(q)^2 h^l.
Eigen::VectorXd reduce_sample(const PotentialSample& V, const ParallelSpectrum& par, int j,
                              std::size_t transverse_size);

/// M = E0 sup_x sum_xi a(x - xi), sampled on an 8^d cell grid, plus the truncation tail.
double sup_bound(const SingleSiteProfile& profile, const CouplingLaw& law, int d, int halo);

}  // namespace surfstates

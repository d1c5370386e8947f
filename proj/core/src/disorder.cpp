#include "surfstates/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "surfstates/error.hpp"
#include "surfstates/special_functions.hpp"

namespace surfstates {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

double euclidean_norm(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double shape_value(const TransverseShape& shape, const std::vector<double>& z) {
  return std::visit(overloaded{
                        [&](const PowerLawShape& s) { return s.amplitude * std::pow(1.0 + euclidean_norm(z), -s.kappa); },
                        [&](const GaussianClassShape& s) {
                          return s.amplitude * std::exp(-s.rate * std::pow(euclidean_norm(z), s.exponent));
                        },
                        [&](const CompactShape& s) {
                          for (double v : z) {
                            if (v < -s.half_width || v >= s.half_width) return 0.0;
                          }
                          return s.amplitude;
                        },
                    },
                    shape);
}

// Radius beyond which the shape vanishes identically (infinite for decaying shapes).
double support_radius(const TransverseShape& shape) {
  if (const auto* c = std::get_if<CompactShape>(&shape)) return c->half_width;
  return kInf;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Sum over sites xi in the realization box with |x - xi|_inf <= radius of weight * shape(x - xi).
// Displacements are formed as (offset_a - xi_a) + step_a so that a joint integer shift of the
// window and the lattice reproduces bit-identical arguments.
double lattice_sum(const TransverseShape& shape, double weight, const DisorderRealization& real,
                   const std::vector<double>& offset, const std::vector<double>& step, int radius) {
  const int d = static_cast<int>(offset.size());
  const double reach = std::min(static_cast<double>(radius), support_radius(shape));
  std::vector<std::int64_t> lo(d), hi(d);
  for (int a = 0; a < d; ++a) {
    const double x = offset[a] + step[a];
    lo[a] = static_cast<std::int64_t>(std::ceil(x - reach));
    hi[a] = static_cast<std::int64_t>(std::floor(x + reach));
    if (lo[a] < real.box().lo[a] || hi[a] > real.box().hi[a]) {
      std::ostringstream msg;
      msg << "lattice box does not cover the halo around x_" << a << " = " << x;
      throw Error(ErrorKind::HaloTooSmall, msg.str());
    }
  }
  std::vector<std::int64_t> xi(lo);
  std::vector<double> z(d);
  double total = 0.0;
  while (true) {
    const double lambda = real.value(xi);
    if (lambda != 0.0) {
      for (int a = 0; a < d; ++a) z[a] = (offset[a] - static_cast<double>(xi[a])) + step[a];
      total += lambda * shape_value(shape, z);
    }
    int a = d - 1;
    while (a >= 0 && xi[a] == hi[a]) {
      xi[a] = lo[a];
      --a;
    }
    if (a < 0) break;
    ++xi[a];
  }
  return weight * total;
}

Eigen::VectorXd lattice_field(const TransverseShape& shape, double weight, const DisorderRealization& real,
                              const LatticeWindow& window, int radius) {
  const int d = window.dimension();
  if (real.box().dimension() != d) throw Error(ErrorKind::InvalidArgument, "lattice and window dimensions differ");
  Eigen::VectorXd out(static_cast<Eigen::Index>(window.size()));
  std::vector<double> offset(d), step(d);
  for (std::size_t p = 0; p < window.size(); ++p) {
    const auto idx = window.unflatten(p);
    for (int a = 0; a < d; ++a) {
      offset[a] = window.corner(a);
      step[a] = (idx[a] + 1) * window.spacing();
    }
    out(static_cast<Eigen::Index>(p)) = lattice_sum(shape, weight, real, offset, step, radius);
  }
  return out;
}

}  // namespace

// ---- profiles ----------------------------------------------------------------

double SingleSiteProfile::transverse(const std::vector<double>& x) const { return shape_value(shape, x); }

double SingleSiteProfile::longitudinal(const std::vector<double>& y) const {
  return std::visit(overloaded{
                        [](const ConstantFactor&) { return 1.0; },
                        [&](const IndicatorFactor& f) {
                          for (double v : y) {
                            if (std::abs(v) > f.half_width) return 0.0;
                          }
                          return 1.0;
                        },
                    },
                    factor);
}

double SingleSiteProfile::value(const std::vector<double>& x, const std::vector<double>& y) const {
  return transverse(x) * longitudinal(y);
}

std::string SingleSiteProfile::describe() const {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const PowerLawShape& s) { out << "power(kappa=" << s.kappa << ",amp=" << s.amplitude << ")"; },
                 [&](const GaussianClassShape& s) {
                   out << "gaussian(exp=" << s.exponent << ",rate=" << s.rate << ",amp=" << s.amplitude << ")";
                 },
                 [&](const CompactShape& s) { out << "compact(w=" << s.half_width << ",amp=" << s.amplitude << ")"; },
             },
             shape);
  std::visit(overloaded{
                 [&](const ConstantFactor&) {},
                 [&](const IndicatorFactor& f) { out << "*indicator(" << f.half_width << ")"; },
             },
             factor);
  return out.str();
}

double shape_envelope(const TransverseShape& shape, double r) {
  return std::visit(overloaded{
                        [&](const PowerLawShape& s) { return s.amplitude * std::pow(1.0 + r, -s.kappa); },
                        [&](const GaussianClassShape& s) { return s.amplitude * std::exp(-s.rate * std::pow(r, s.exponent)); },
                        [&](const CompactShape& s) { return r <= s.half_width ? s.amplitude : 0.0; },
                    },
                    shape);
}

// ---- coupling law --------------------------------------------------------------

CouplingLaw CouplingLaw::uniform(double E0) {
  if (!(E0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "E0 must be positive");
  return {Kind::uniform, E0, 1.0};
}

CouplingLaw CouplingLaw::power(double kappa, double E0) {
  if (!(E0 > 0.0) || !(kappa > 0.0)) throw Error(ErrorKind::InvalidArgument, "power law needs E0 > 0, kappa > 0");
  return {Kind::power, E0, kappa};
}

double CouplingLaw::cdf(double E) const {
  if (E <= 0.0) return 0.0;
  if (E >= E0) return 1.0;
  return std::pow(E / E0, exponent());
}

double CouplingLaw::inverse_cdf(double u) const {
  if (kind == Kind::uniform) return E0 * u;
  return E0 * std::pow(u, 1.0 / kappa);
}

std::string CouplingLaw::describe() const {
  std::ostringstream out;
  if (kind == Kind::uniform) {
    out << "uniform(E0=" << E0 << ")";
  } else {
    out << "power(kappa=" << kappa << ",E0=" << E0 << ")";
  }
  return out.str();
}

// ---- lattice boxes -------------------------------------------------------------

std::size_t LatticeBox::size() const {
  std::size_t n = 1;
  for (std::size_t a = 0; a < lo.size(); ++a) n *= static_cast<std::size_t>(hi[a] - lo[a] + 1);
  return n;
}

bool LatticeBox::contains(const std::vector<std::int64_t>& xi) const {
  for (std::size_t a = 0; a < lo.size(); ++a) {
    if (xi[a] < lo[a] || xi[a] > hi[a]) return false;
  }
  return true;
}

std::size_t LatticeBox::flatten(const std::vector<std::int64_t>& xi) const {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < lo.size(); ++a) {
    flat = flat * static_cast<std::size_t>(hi[a] - lo[a] + 1) + static_cast<std::size_t>(xi[a] - lo[a]);
  }
  return flat;
}

std::vector<std::int64_t> LatticeBox::site(std::size_t flat) const {
  std::vector<std::int64_t> xi(lo.size());
  for (std::size_t a = lo.size(); a-- > 0;) {
    const auto extent = static_cast<std::size_t>(hi[a] - lo[a] + 1);
    xi[a] = lo[a] + static_cast<std::int64_t>(flat % extent);
    flat /= extent;
  }
  return xi;
}

LatticeBox LatticeBox::translated(const std::vector<std::int64_t>& shift) const {
  LatticeBox b = *this;
  for (std::size_t a = 0; a < lo.size(); ++a) {
    b.lo[a] += shift[a];
    b.hi[a] += shift[a];
  }
  return b;
}

LatticeBox lattice_cover(const LatticeWindow& window, int halo) {
  if (halo < 0) throw Error(ErrorKind::InvalidArgument, "halo must be non-negative");
  LatticeBox box;
  for (int a = 0; a < window.dimension(); ++a) {
    box.lo.push_back(static_cast<std::int64_t>(std::floor(window.corner(a))) - halo);
    box.hi.push_back(static_cast<std::int64_t>(std::ceil(window.corner(a) + window.side(a))) + halo);
  }
  return box;
}

// ---- sampling --------------------------------------------------------------------

double keyed_uniform(std::uint64_t seed, const std::vector<std::int64_t>& key) {
  std::uint64_t h = splitmix64(seed);
  for (std::int64_t k : key) h = splitmix64(h ^ static_cast<std::uint64_t>(k));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double coupling_value(const CouplingLaw& law, std::uint64_t seed, const std::vector<std::int64_t>& key) {
  return law.inverse_cdf(keyed_uniform(seed, key));
}

DisorderRealization::DisorderRealization(CouplingLaw law, LatticeBox box, std::uint64_t seed,
                                         std::vector<std::int64_t> key_shift)
    : law_(law), box_(std::move(box)), seed_(seed), key_shift_(std::move(key_shift)) {
  if (key_shift_.empty()) key_shift_.assign(box_.lo.size(), 0);
  const std::size_t n = box_.size();
  values_.resize(n);
  std::vector<std::int64_t> key(box_.lo.size());
  for (std::size_t f = 0; f < n; ++f) {
    const auto xi = box_.site(f);
    for (std::size_t a = 0; a < xi.size(); ++a) key[a] = xi[a] - key_shift_[a];
    values_[f] = coupling_value(law_, seed_, key);
  }
}

DisorderRealization DisorderRealization::constant(const LatticeBox& box, double value, double E0) {
  DisorderRealization r;
  r.law_ = CouplingLaw::uniform(E0);
  r.box_ = box;
  r.key_shift_.assign(box.lo.size(), 0);
  r.values_.assign(box.size(), value);
  return r;
}

double DisorderRealization::value(const std::vector<std::int64_t>& xi) const {
  if (!box_.contains(xi)) throw Error(ErrorKind::HaloTooSmall, "lattice site outside the sampled box");
  return values_[box_.flatten(xi)];
}

DisorderRealization DisorderRealization::shifted(const std::vector<std::int64_t>& shift) const {
  DisorderRealization r = *this;
  r.box_ = box_.translated(shift);
  for (std::size_t a = 0; a < shift.size(); ++a) r.key_shift_[a] += shift[a];
  return r;
}

std::string DisorderRealization::manifest() const {
  std::ostringstream out;
  out << "seed=" << seed_ << "\nlaw=" << law_.describe() << "\nlattice_lo=";
  for (std::size_t a = 0; a < box_.lo.size(); ++a) out << (a ? "," : "") << box_.lo[a];
  out << "\nlattice_hi=";
  for (std::size_t a = 0; a < box_.hi.size(); ++a) out << (a ? "," : "") << box_.hi[a];
  out << "\nkey_shift=";
  for (std::size_t a = 0; a < key_shift_.size(); ++a) out << (a ? "," : "") << key_shift_[a];
  out << '\n';
  return out.str();
}

DisorderRealization sample_couplings(const CouplingLaw& law, const LatticeBox& box, std::uint64_t seed) {
  return DisorderRealization(law, box, seed);
}

// ---- truncation ------------------------------------------------------------------

double tail_bound(const TransverseShape& shape, int d, int R) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
  if (R < 0) return kInf;
  if (const auto* c = std::get_if<CompactShape>(&shape)) {
    return static_cast<double>(R) >= c->half_width ? 0.0 : kInf;
  }
  const double s = 0.5 * std::sqrt(static_cast<double>(d));
  const double T = static_cast<double>(R) - 2.0 * s;
  if (T < 0.0) return kInf;
  const double sphere = unit_sphere_area(d);
  if (const auto* p = std::get_if<PowerLawShape>(&shape)) {
    if (!(p->kappa > d)) return kInf;
    return p->amplitude * sphere * std::pow(std::max(1.0, s), d - 1) * std::pow(1.0 + T, d - p->kappa) /
           (p->kappa - d);
  }
  const auto& g = std::get<GaussianClassShape>(shape);
  // (t + s)^{d-1} expanded binomially; each term is an upper incomplete gamma integral.
  double total = 0.0;
  const double x = g.rate * std::pow(T, g.exponent);
  for (int k = 0; k <= d - 1; ++k) {
    const double a = (k + 1.0) / g.exponent;
    const double integral = std::pow(g.rate, -a) / g.exponent * boost::math::tgamma(a, x);
    total += boost::math::binomial_coefficient<double>(static_cast<unsigned>(d - 1), static_cast<unsigned>(k)) *
             std::pow(s, d - 1 - k) * integral;
  }
  return g.amplitude * sphere * total;
}

int choose_halo(const TransverseShape& shape, int d, double E0, double tail_tol, int max_halo) {
  for (int R = 0; R <= max_halo; ++R) {
    if (E0 * tail_bound(shape, d, R) <= tail_tol) return R;
  }
  std::ostringstream msg;
  msg << "no halo up to " << max_halo << " meets tail tolerance " << tail_tol;
  throw Error(ErrorKind::HaloTooSmall, msg.str());
}

// ---- alloy potential ---------------------------------------------------------------

AlloyPotential::AlloyPotential(SingleSiteProfile profile, DisorderRealization realization, int halo, double tail_tol)
    : profile_(std::move(profile)), realization_(std::move(realization)), halo_(halo), tail_tol_(tail_tol) {
  const int d = realization_.box().dimension();
  const double tail = realization_.law().E0 * tail_bound(profile_.shape, d, halo_);
  if (tail > tail_tol_) {
    std::ostringstream msg;
    msg << "halo " << halo_ << " leaves a tail bound " << tail << " above tolerance " << tail_tol_;
    throw Error(ErrorKind::HaloTooSmall, msg.str());
  }
}

double AlloyPotential::transverse_value(const std::vector<double>& x) const {
  return lattice_sum(profile_.shape, 1.0, realization_, x, std::vector<double>(x.size(), 0.0), halo_);
}

double AlloyPotential::value(const std::vector<double>& x, const std::vector<double>& y) const {
  const double g = profile_.longitudinal(y);
  return g == 0.0 ? 0.0 : g * transverse_value(x);
}

Eigen::VectorXd AlloyPotential::transverse_field(const LatticeWindow& window) const {
  return lattice_field(profile_.shape, 1.0, realization_, window, halo_);
}

PotentialSample AlloyPotential::sample(const LatticeWindow& window, const ParallelSpectrum& par) const {
  Eigen::VectorXd A = transverse_field(window);
  if (profile_.y_independent()) return PotentialSample::y_independent(std::move(A));
  if (!par.grid) throw Error(ErrorKind::InvalidArgument, "y-dependent profiles need a longitudinal grid");
  Eigen::VectorXd g(static_cast<Eigen::Index>(par.grid->size()));
  for (std::size_t q = 0; q < par.grid->size(); ++q) g(static_cast<Eigen::Index>(q)) = profile_.longitudinal(par.grid->point(q));
  return PotentialSample::separable(std::move(A), std::move(g));
}

// ---- reduced potentials ------------------------------------------------------------

double ReducedProfile::value(const std::vector<double>& x) const { return weight * shape_value(shape, x); }

ReducedProfile reduce_site(const SingleSiteProfile& profile, const ParallelSpectrum& par, int j) {
  if (j < 1 || j > static_cast<int>(par.eigenpairs.size())) {
    throw Error(ErrorKind::InvalidArgument, "eigenstate index out of range");
  }
  ReducedProfile w;
  w.j = j;
  w.shape = profile.shape;
  if (profile.y_independent()) {
    w.weight = 1.0;
    return w;
  }
  if (!par.has_vectors() || !par.grid) {
    throw Error(ErrorKind::InvalidArgument, "y-dependent profiles need longitudinal eigenvectors");
  }
  const Eigen::VectorXd& psi = par.eigenpairs[j - 1].psi;
  double sum = 0.0;
  for (std::size_t q = 0; q < par.grid->size(); ++q) {
    const double p = psi(static_cast<Eigen::Index>(q));
    sum += profile.longitudinal(par.grid->point(q)) * p * p;
  }
  w.weight = sum * par.cell_volume();
  return w;
}

Eigen::VectorXd reduced_field(const AlloyPotential& V, const ReducedProfile& w, const LatticeWindow& window) {
  return lattice_field(w.shape, w.weight, V.realization(), window, V.halo());
}

double reduced_field_at(const AlloyPotential& V, const ReducedProfile& w, const std::vector<double>& x) {
  return lattice_sum(w.shape, w.weight, V.realization(), x, std::vector<double>(x.size(), 0.0), V.halo());
}

Eigen::VectorXd reduce_sample(const PotentialSample& V, const ParallelSpectrum& par, int j,
                              std::size_t transverse_size) {
  const auto np = static_cast<Eigen::Index>(transverse_size);
  if (V.product.size() == 0 && V.longitudinal.size() == 0) return V.transverse;
  if (!par.has_vectors()) throw Error(ErrorKind::InvalidArgument, "reduction needs longitudinal eigenvectors");
  const Eigen::VectorXd& psi = par.eigenpairs[j - 1].psi;
  const double cell = par.cell_volume();
  if (V.product.size() == 0) {
    return V.transverse * ((V.longitudinal.array() * psi.array().square()).sum() * cell);
  }
  const Eigen::Index nq = psi.size();
  Eigen::VectorXd W(np);
  for (Eigen::Index p = 0; p < np; ++p) {
    W(p) = (V.product.segment(p * nq, nq).array() * psi.array().square()).sum() * cell;
  }
  return W;
}

double sup_bound(const SingleSiteProfile& profile, const CouplingLaw& law, int d, int halo) {
  constexpr int kExactRadius = 40;
  constexpr int kCellSamples = 8;
  const int radius = std::min(halo, kExactRadius);
  const double reach = std::min(static_cast<double>(radius), support_radius(profile.shape));
  std::size_t total_points = 1;
  for (int a = 0; a < d; ++a) total_points *= kCellSamples;

  double best = 0.0;
  std::vector<double> x(d), z(d);
  std::vector<std::int64_t> xi(d), lo(d), hi(d);
  for (std::size_t f = 0; f < total_points; ++f) {
    std::size_t rest = f;
    for (int a = 0; a < d; ++a) {
      x[a] = static_cast<double>(rest % kCellSamples) / kCellSamples;
      rest /= kCellSamples;
      lo[a] = static_cast<std::int64_t>(std::ceil(x[a] - reach));
      hi[a] = static_cast<std::int64_t>(std::floor(x[a] + reach));
    }
    xi = lo;
    double sum = 0.0;
    while (true) {
      for (int a = 0; a < d; ++a) z[a] = x[a] - static_cast<double>(xi[a]);
      sum += profile.transverse(z);
      int a = d - 1;
      while (a >= 0 && xi[a] == hi[a]) {
        xi[a] = lo[a];
        --a;
      }
      if (a < 0) break;
      ++xi[a];
    }
    best = std::max(best, sum);
  }
  const double tail = radius < halo ? tail_bound(profile.shape, d, radius) : 0.0;
  return law.E0 * (best + tail);
}

}  // namespace surfstates

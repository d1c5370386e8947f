#include "surfstates/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "surfstates/error.hpp"

namespace surfstates {

namespace {

// Lanczos approximation, g = 7, nine terms.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoefficients = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

double lanczos_series(double z) {
  double sum = kLanczosCoefficients[0];
  for (std::size_t k = 1; k < kLanczosCoefficients.size(); ++k) {
    sum += kLanczosCoefficients[k] / (z + static_cast<double>(k));
  }
  return sum;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "log_gamma requires x > 0");
  }
  if (x < 0.5) {
    // Reflection: Γ(x)Γ(1−x) = π / sin(πx).
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
         std::log(lanczos_series(z));
}

double gamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) {
    throw Error(ErrorKind::InvalidArgument, "gamma has poles at non-positive integers");
  }
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma(1.0 - x));
  }
  if (x > 150.0) {
    return std::exp(log_gamma(x));
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * lanczos_series(z);
}

double beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "beta requires positive arguments");
  }
  if (a + b < 100.0) {
    return gamma(a) * gamma(b) / gamma(a + b);
  }
  return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

double unit_ball_volume(int d) {
  if (d < 0) {
    throw Error(ErrorKind::InvalidArgument, "dimension must be non-negative");
  }
  const double half = 0.5 * d;
  return std::pow(std::numbers::pi, half) / gamma(half + 1.0);
}

double unit_sphere_area(int d) {
  if (d < 1) {
    throw Error(ErrorKind::InvalidArgument, "sphere area needs d >= 1");
  }
  return d * unit_ball_volume(d);
}

}  // namespace surfstates

#pragma once

namespace surfstates {

// Lanczos-type approximations, ~1e-13 relative on x in (0, 150].
double log_gamma(double x);
double gamma(double x);
double beta(double a, double b);

/// ω_d = π^{d/2} / Γ(d/2 + 1), volume of the unit ball in R^d.
double unit_ball_volume(int d);

/// Surface area of the unit sphere S^{d-1} ⊂ R^d, i.e. d·ω_d.
double unit_sphere_area(int d);

}  // namespace surfstates

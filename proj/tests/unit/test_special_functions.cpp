#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "surfstates/error.hpp"
#include "surfstates/special_functions.hpp"

using namespace surfstates;

TEST(SpecialFunctions, GammaMatchesStandardLibrary) {
  for (double x = 0.05; x < 40.0; x += 0.173) {
    EXPECT_NEAR(surfstates::gamma(x) / std::tgamma(x), 1.0, 1e-12) << "x=" << x;
    EXPECT_NEAR(log_gamma(x), std::lgamma(x), 1e-12 * std::max(1.0, std::abs(std::lgamma(x)))) << "x=" << x;
  }
}

TEST(SpecialFunctions, HalfIntegerValues) {
  EXPECT_NEAR(surfstates::gamma(0.5), std::sqrt(std::numbers::pi), 1e-14);
  EXPECT_NEAR(surfstates::gamma(1.5), 0.5 * std::sqrt(std::numbers::pi), 1e-14);
  EXPECT_NEAR(surfstates::gamma(5.0), 24.0, 1e-11);
}

TEST(SpecialFunctions, BetaIdentities) {
  EXPECT_NEAR(beta(1.0, 1.0), 1.0, 1e-13);
  EXPECT_NEAR(beta(0.5, 0.5), std::numbers::pi, 1e-12);
  EXPECT_NEAR(beta(2.0, 3.0), 1.0 / 12.0, 1e-13);
  EXPECT_NEAR(beta(1.5, 2.5), beta(2.5, 1.5), 1e-15);
  EXPECT_THROW(beta(-1.0, 1.0), Error);
}

TEST(SpecialFunctions, UnitBall) {
  EXPECT_NEAR(unit_ball_volume(1), 2.0, 1e-13);
  EXPECT_NEAR(unit_ball_volume(2), std::numbers::pi, 1e-13);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * std::numbers::pi / 3.0, 1e-13);
  EXPECT_NEAR(unit_sphere_area(2), 2.0 * std::numbers::pi, 1e-13);
  EXPECT_NEAR(unit_sphere_area(3), 4.0 * std::numbers::pi, 1e-13);
}

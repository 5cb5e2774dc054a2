#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "gapbound/bessel.hpp"
#include "gapbound/numerics.hpp"

using namespace gapbound;

TEST(Trig, ExactZerosAtIntegers) {
  for (int k = -50; k <= 50; ++k) {
    EXPECT_EQ(sin_pi(static_cast<double>(k)), 0.0) << k;
    EXPECT_EQ(cos_pi(k + 0.5), 0.0) << k;
  }
  EXPECT_EQ(sin_pi(0.5), 1.0);
  EXPECT_EQ(sin_pi(-0.5), -1.0);
  EXPECT_EQ(sin_pi(1e15 + 1.0), 0.0);
}

TEST(Trig, MatchesLibm) {
  for (double x = -7.3; x < 7.3; x += 0.0371) {
    EXPECT_NEAR(sin_pi(x), std::sin(kPi * x), 1e-14) << x;
    EXPECT_NEAR(cos_pi(x), std::cos(kPi * x), 1e-14) << x;
  }
}

TEST(Trig, SincLimit) {
  EXPECT_EQ(sinc_pi(0.0), 1.0);
  for (double x : {1e-9, 1e-6, 1e-3, 0.3, 2.5})
    EXPECT_NEAR(sinc_pi(x), std::sin(kPi * x) / (kPi * x), 1e-15) << x;
  EXPECT_EQ(sinc_pi(3.0), 0.0);
}

TEST(Summation, NeumaierRecoversCancellation) {
  NeumaierSum s;
  s.add(1.0);
  s.add(1e100);
  s.add(1.0);
  s.add(-1e100);
  EXPECT_EQ(s.value(), 2.0);
}

TEST(FitLine, RecoversExactLine) {
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0};
  std::vector<double> y;
  for (double v : x) y.push_back(2.5 - 0.75 * v);
  const LinearFit f = fit_line(x, y);
  EXPECT_NEAR(f.slope, -0.75, 1e-14);
  EXPECT_NEAR(f.intercept, 2.5, 1e-14);
  EXPECT_NEAR(f.residual_norm, 0.0, 1e-13);
  EXPECT_THROW(fit_line(std::vector<double>{1.0}, std::vector<double>{1.0}), Error);
  EXPECT_THROW(fit_line(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 2.0}), Error);
}

TEST(Gauss, IntegratesPolynomialsExactly) {
  for (int order : {8, 16, 32}) {
    const GaussRule& g = gauss_legendre_cached(order);
    double wsum = 0.0;
    for (double w : g.weights) wsum += w;
    EXPECT_NEAR(wsum, 2.0, 1e-14);
    // degree 2 order - 1 is exact
    const int deg = 2 * order - 2;
    double acc = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) acc += g.weights[i] * std::pow(g.nodes[i], deg);
    EXPECT_NEAR(acc, 2.0 / (deg + 1), 1e-13) << order;
  }
  EXPECT_THROW(gauss_legendre_cached(5), Error);
}

TEST(Gauss, CompositeIntegral) {
  const double v = integrate_panels([](double x) { return std::exp(x); }, 0.0, 3.0, 4);
  EXPECT_NEAR(v, std::exp(3.0) - 1.0, 1e-12);
}

TEST(Bessel, MatchesStdCylBessel) {
  for (double z = 0.0; z < 200.0; z += 0.173) {
    const double ref = std::cyl_bessel_j(1.0, z);
    EXPECT_NEAR(bessel::j1(z), ref, 2e-12) << z;
    EXPECT_NEAR(bessel::j1(-z), -ref, 2e-12) << z;
  }
}

TEST(Bessel, FirstZero) {
  EXPECT_NEAR(bessel::j1(3.8317059702075125), 0.0, 1e-14);
}

TEST(Bessel, SeriesAndAsymptoticAgreeAtSwitch) {
  EXPECT_NEAR(bessel::j1_series(bessel::kSeriesLimit), bessel::j1_asymptotic(bessel::kSeriesLimit), 1e-11);
}

TEST(BallVolume, LowDimensions) {
  EXPECT_NEAR(unit_ball_volume(1), 2.0, 1e-15);
  EXPECT_NEAR(unit_ball_volume(2), kPi, 1e-15);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 / 3.0 * kPi, 1e-14);
}

#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "saddlecheck/forms.hpp"

using namespace saddle::forms;

namespace {

long double printed_defect(long double a, long double yt, long double zt, long double d) {
  const long double r2 = std::sqrt(2.0L);
  const long double hy = std::tanh(yt / r2);
  const long double hz = std::tanh(zt / r2);
  const long double pot = hy * hz * (2 * a * a - 1 - a * a * hy * hy - a * a * hz * hz + hy * hy * hz * hz);
  const long double drift = d * a * a * r2 / (yt * yt - zt * zt) *
                            (yt * hz - zt * hy + hy * hz * (zt * hz - yt * hy));
  return pot - drift;
}

double numeric_inner(double x, RhoKind kind) {
  using boost::math::quadrature::gauss_kronrod;
  auto f = [kind](double s) {
    const double hp = heteroclinic(s, 1);
    return kind == RhoKind::rho ? hp * hp : s * hp * hp;
  };
  return gauss_kronrod<double, 61>::integrate(f, x, std::numeric_limits<double>::infinity(), 15, 1e-14);
}

double numeric_rho(double z, RhoKind kind) {
  using boost::math::quadrature::gauss_kronrod;
  auto outer = [kind](double s) {
    const double hp = heteroclinic(s, 1);
    return numeric_inner(s, kind) / (hp * hp);
  };
  return heteroclinic(z, 1) * gauss_kronrod<double, 31>::integrate(outer, 0.0, z, 10, 1e-13);
}

}  // namespace

TEST(DimensionParams, FromMAndN) {
  auto p = DimensionParams::from_m(4);
  EXPECT_EQ(p.n, 8);
  EXPECT_DOUBLE_EQ(p.drift, 3.0);
  auto q = DimensionParams::from_n(12);
  EXPECT_EQ(q.m, 6);
  EXPECT_DOUBLE_EQ(q.drift, 5.0);
  EXPECT_THROW(DimensionParams::from_m(0), std::invalid_argument);
  EXPECT_THROW(DimensionParams::from_n(7), std::invalid_argument);
}

TEST(Heteroclinic, PointValues) {
  EXPECT_EQ(heteroclinic(0, 0), 0.0);
  EXPECT_NEAR(heteroclinic(0, 1), 0.7071067811865475, 2e-16);
  EXPECT_NEAR(heteroclinic(1.3, 2), std::pow(heteroclinic(1.3), 3) - heteroclinic(1.3), 4e-16);
  EXPECT_THROW(heteroclinic(0, 3), std::invalid_argument);
}

TEST(Heteroclinic, DerivativesMatchFiniteDifferences) {
  for (double x : {-3.0, -0.7, 0.0, 0.4, 2.5}) {
    const double d = 1e-5;
    const double fd1 = (heteroclinic(x + d) - heteroclinic(x - d)) / (2 * d);
    const double fd2 = (heteroclinic(x + d, 1) - heteroclinic(x - d, 1)) / (2 * d);
    EXPECT_NEAR(heteroclinic(x, 1), fd1, 1e-9);
    EXPECT_NEAR(heteroclinic(x, 2), fd2, 1e-9);
  }
}

TEST(Heteroclinic, OddIncreasingBoundedModica) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-20.0, 20.0);
  double worst_modica = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double x = dist(rng);
    const double h = heteroclinic(x);
    EXPECT_EQ(heteroclinic(-x), -h);
    EXPECT_LT(std::abs(h), 1.0);
    const double hp = heteroclinic(x, 1);
    worst_modica = std::max(worst_modica, std::abs(0.5 * hp * hp - double_well(h)));
  }
  EXPECT_LT(worst_modica, 1e-14);
  double prev = heteroclinic(-20.0);
  for (int k = 1; k <= 10000; ++k) {
    const double x = -20.0 + 40.0 * k / 10000.0;
    const double h = heteroclinic(x);
    EXPECT_GT(h, prev) << x;
    prev = h;
  }
}

TEST(Heteroclinic, OneMinusSquareIsAccurateInTail) {
  const double x = 30.0;
  const double v = x / kSqrt2;
  const double expect = 4.0 * std::exp(-2 * v) / std::pow(1 + std::exp(-2 * v), 2);
  EXPECT_NEAR(one_minus_h2(x) / expect, 1.0, 1e-13);
  EXPECT_NEAR(one_minus_h2(0.3), 1 - std::pow(heteroclinic(0.3), 2), 1e-15);
}

TEST(DoubleWell, Values) {
  EXPECT_EQ(double_well(1), 0.0);
  EXPECT_EQ(double_well(0), 0.25);
  for (double u : {0.1, 0.5, 0.9, 1.7}) EXPECT_EQ(double_well(u), double_well(-u));
}

TEST(HHSupersolution, Values) {
  for (double y : {0.0, 1.0, 5.0}) EXPECT_EQ(hh_supersolution(y, 0), 0.0);
  EXPECT_NEAR(hh_supersolution(0.1, 0.1) / (0.5 * 0.01), 1.0, 0.05);
  // H(x) = 1 - 2exp(-sqrt2 x) + O(exp(-2sqrt2 x)), so 1 - H(10)^2 ~ 4exp(-10sqrt2) ~ 2.9e-6.
  const double e = std::exp(-10 * kSqrt2);
  EXPECT_NEAR(1.0 - hh_supersolution(10, 10), 4 * e, 20 * e * e);
  EXPECT_NEAR(hh_supersolution(20, 20), 1.0, 1e-11);
}

TEST(Coordinates, RoundTripAndOmega) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(0.0, 50.0);
  for (int k = 0; k < 10000; ++k) {
    CoordST p{dist(rng), dist(rng)};
    CoordST q = to_st(to_yz(p));
    const double scale = std::max(p.s, p.t);
    const double ulp = std::nextafter(scale, 1e300) - scale;
    EXPECT_LE(std::abs(q.s - p.s), 2 * ulp);
    EXPECT_LE(std::abs(q.t - p.t), 2 * ulp);
    const CoordYZ yz = to_yz(p);
    EXPECT_EQ(in_omega(p), yz.y > 0 && yz.z > 0 && yz.z < yz.y) << p.s << " " << p.t;
  }
  EXPECT_TRUE(in_omega({2, 1}));
  EXPECT_FALSE(in_omega({1, 2}));
  EXPECT_FALSE(in_omega({1, 0}));
  EXPECT_FALSE(in_omega({1, 1}));
}

TEST(SubsolutionDefect, NegativeAtCriticalA) {
  EXPECT_LT(subsolution_defect(0.45, 2, 1, DimensionParams::from_m(4)), 0.0);
}

TEST(SubsolutionDefect, MatchesPrintedFormula) {
  const auto p = DimensionParams::from_m(4);
  const long double ref = printed_defect(0.3L, 3.0L, 0.5L, 3.0L);
  EXPECT_NEAR(subsolution_defect(0.3, 3, 0.5, p), static_cast<double>(ref), 1e-14);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(0.01, 0.6), uz(0.01, 8.0), ug(0.05, 6.0);
  for (int k = 0; k < 2000; ++k) {
    const double a = ua(rng), zt = uz(rng), yt = zt + ug(rng);
    for (int m : {1, 4, 5, 6}) {
      const auto q = DimensionParams::from_m(m);
      const long double r = printed_defect(a, yt, zt, q.drift);
      EXPECT_NEAR(subsolution_defect(a, yt, zt, q), static_cast<double>(r), 1e-12);
    }
  }
}

TEST(SubsolutionDefect, DriftVanishesAtInfinity) {
  const auto p = DimensionParams::from_m(4);
  double prev = std::numeric_limits<double>::infinity();
  for (double zt : {2.0, 5.0, 10.0, 20.0, 40.0}) {
    const double yt = zt + 1;
    const double hy = heteroclinic(yt), hz = heteroclinic(zt);
    const double ey = one_minus_h2(yt), ez = one_minus_h2(zt);
    const double a = 0.3;
    const double pot = hy * hz * (ey * ez - (1 - a * a) * (ey + ez));
    const double drift = std::abs(subsolution_defect(a, yt, zt, p) - pot);
    EXPECT_LT(drift, prev);
    prev = drift;
  }
  EXPECT_LT(prev, 1e-20);
}

TEST(SubsolutionDefect, RejectsDiagonal) {
  const auto p = DimensionParams::from_m(4);
  EXPECT_THROW(subsolution_defect(0.3, 0, 0, p), std::domain_error);
  EXPECT_THROW(subsolution_defect(0.3, 1.0, 1.0, p), std::domain_error);
  EXPECT_THROW(subsolution_defect(0.3, 1.0 + 5e-7, 1.0, p), std::domain_error);
  EXPECT_THROW(subsolution_defect(-0.3, 2.0, 1.0, p), std::domain_error);
  EXPECT_NO_THROW(subsolution_defect(0.3, 1.0 + 2e-6, 1.0, p));
}

TEST(LogSlope, ValuesAndMonotone) {
  EXPECT_EQ(log_slope(0.0), 1.0);
  for (double x : {0.01, 0.5, 2.0, 7.0}) {
    EXPECT_NEAR(log_slope(x), x * heteroclinic(x, 1) / heteroclinic(x), 1e-14);
    EXPECT_LT(log_slope(x + 0.1), log_slope(x));
  }
}

TEST(Rho, InnerIntegralsClosedFormMatchQuadrature) {
  for (double x : {0.0, 0.3, 1.0, 2.5, 6.0}) {
    EXPECT_NEAR(rho_inner(x, RhoKind::rho), numeric_inner(x, RhoKind::rho), 1e-13) << x;
    EXPECT_NEAR(rho_inner(x, RhoKind::rho1), numeric_inner(x, RhoKind::rho1), 1e-13) << x;
  }
}

TEST(Rho, ValuesAgainstNestedQuadrature) {
  EXPECT_EQ(rho(0.0, RhoKind::rho), 0.0);
  EXPECT_EQ(rho(0.0, RhoKind::rho1), 0.0);
  for (double z : {0.5, 1.0, 2.0, 4.0}) {
    EXPECT_NEAR(rho(z, RhoKind::rho), numeric_rho(z, RhoKind::rho), 1e-8) << z;
    EXPECT_NEAR(rho(z, RhoKind::rho1), numeric_rho(z, RhoKind::rho1), 1e-8) << z;
  }
  EXPECT_NEAR(rho(1.0), 0.28703, 1e-5);
}

TEST(Rho, MatchesElementaryAntiderivative) {
  // inner/H'^2 reduces to (3 + 4q + q^2)/(6 sqrt2), q = exp(-sqrt2 x).
  for (double z : {0.1, 0.7, 3.0, 8.0, 15.0}) {
    const double q = std::exp(-kSqrt2 * z);
    const double integral = 3 * z + 2 * kSqrt2 * (1 - q) + (1 - q * q) / (2 * kSqrt2);
    EXPECT_NEAR(rho(z), heteroclinic(z, 1) * integral / (6 * kSqrt2), 1e-11) << z;
  }
}

TEST(Rho, SlopeAtOrigin) {
  const double d = 1e-3;
  const double slope = (-3 * rho(0.0) + 4 * rho(d) - rho(2 * d)) / (2 * d);
  EXPECT_NEAR(slope, 2.0 / 3.0, 1e-6);
}

TEST(Rho, OdeResidualsAndSign) {
  // Five-point second difference; quadrature noise is amplified by ~5/d^2.
  const double d = 0.02;
  auto second = [d](RhoKind kind, double z) {
    return (-rho(z + 2 * d, kind) + 16 * rho(z + d, kind) - 30 * rho(z, kind) + 16 * rho(z - d, kind) -
            rho(z - 2 * d, kind)) /
           (12 * d * d);
  };
  double worst0 = 0.0, worst1 = 0.0;
  for (int k = 4; k <= 800; k += 2) {
    const double z = k * 0.01;
    const double h = heteroclinic(z), hp = heteroclinic(z, 1);
    const double r0 = rho(z), a0 = rho(z, RhoKind::rho1);
    EXPECT_GE(r0, 0.0);
    EXPECT_GE(a0, 0.0);
    worst0 = std::max(worst0, std::abs(second(RhoKind::rho, z) - (3 * h * h - 1) * r0 + hp));
    worst1 = std::max(worst1, std::abs(-second(RhoKind::rho1, z) + (3 * h * h - 1) * a0 - z * hp));
  }
  EXPECT_LT(worst0, 1e-6);
  EXPECT_LT(worst1, 1e-6);
}

TEST(GProfile, Limits) {
  EXPECT_EQ(g_profile(0.0), 0.0);
  EXPECT_NEAR(g_profile(40.0), 0.5, 1e-12);
  EXPECT_NEAR(g_profile(1.0), 0.5 * (heteroclinic(1.0) + heteroclinic(1.0, 1)), 1e-16);
}

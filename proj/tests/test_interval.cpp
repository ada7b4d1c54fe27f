#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "saddlecheck/interval.hpp"

using saddle::rigor::GuardError;
using saddle::rigor::Interval;
namespace rg = saddle::rigor;

namespace {

using LFn = std::function<long double(long double)>;
using IFn = std::function<Interval(const Interval&)>;

long double sech2_l(long double x) {
  const long double c = std::cosh(x);
  return 1.0L / (c * c);
}
long double xcsch_l(long double x) { return x == 0 ? 1.0L : x / std::sinh(x); }
long double langevin_l(long double x) {
  if (std::abs(x) < 0.1L) {
    const long double x2 = x * x;
    return x * (1.0L / 3 + x2 * (-1.0L / 45 + x2 * (2.0L / 945 + x2 * (-1.0L / 4725 + x2 * 2.0L / 93555))));
  }
  return 1.0L / std::tanh(x) - 1.0L / x;
}
long double langevin_d_l(long double x) {
  if (std::abs(x) < 0.1L) {
    const long double x2 = x * x;
    return 1.0L / 3 + x2 * (-1.0L / 15 + x2 * (2.0L / 189 + x2 * (-1.0L / 675 + x2 * 2.0L / 10395)));
  }
  const long double s = std::sinh(x);
  return 1.0L / (x * x) - 1.0L / (s * s);
}

// Every sampled point value (computed in extended precision) must lie in the enclosure.
void check_enclosure(const IFn& f, const LFn& g, double lo, double hi, int trials, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  for (int k = 0; k < trials; ++k) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    if (k % 7 == 0) b = a;
    const Interval r = f(Interval(a, b));
    for (int q = 0; q < 20; ++q) {
      const double x = q == 0 ? a : (q == 1 ? b : std::min(b, a + (b - a) * (q / 19.0)));
      const long double y = g(x);
      ASSERT_TRUE(r.lo <= y && y <= r.hi) << "x=" << x << " in [" << a << "," << b << "] value " << (double)y
                                          << " enclosure " << r;
    }
  }
}

}  // namespace

TEST(Interval, ConstructionAndQueries) {
  const Interval x(1.0, 3.0);
  EXPECT_EQ(x.width(), 2.0);
  EXPECT_EQ(x.mid(), 2.0);
  EXPECT_TRUE(x.contains(1.0));
  EXPECT_FALSE(x.contains(3.5));
  EXPECT_THROW(Interval(2.0, 1.0), std::invalid_argument);
  const Interval c = Interval::around(0.1);
  EXPECT_TRUE(c.contains(0.1));
  EXPECT_LT(c.lo, 0.1);
  EXPECT_GT(c.hi, 0.1);
}

TEST(Interval, PaddingIsOutward) {
  for (double x : {1.0, -1.0, 0.0, 1e-300, -3.5e200, 0.1}) {
    EXPECT_LT(rg::down(x, 2), x);
    EXPECT_GT(rg::up(x, 2), x);
    EXPECT_LE(rg::down(x, 2), std::nextafter(std::nextafter(x, -INFINITY), -INFINITY));
    EXPECT_GE(rg::up(x, 2), std::nextafter(std::nextafter(x, INFINITY), INFINITY));
  }
}

TEST(Interval, SquareOfStraddlingInterval) {
  const Interval r = rg::sqr(Interval(-1.0, 2.0));
  EXPECT_LE(r.lo, 0.0);
  EXPECT_GE(r.hi, 4.0);
  EXPECT_GE(r.lo, -1e-300);
  EXPECT_LT(r.hi, 4.0 + 1e-14);
  const Interval p = Interval(-1.0, 2.0) * Interval(-1.0, 2.0);
  EXPECT_LE(p.lo, -2.0);
  EXPECT_GE(p.hi, 4.0);
}

TEST(Interval, TanhOnUnitInterval) {
  const Interval r = rg::tanh(Interval(0.0, 1.0));
  EXPECT_LE(r.lo, 0.0);
  EXPECT_GE(r.hi, std::tanh(1.0));
  EXPECT_LT(r.hi - std::tanh(1.0), 2e-15);
}

TEST(Interval, GuardsThrow) {
  EXPECT_THROW(Interval(1.0) / Interval(-1.0, 1.0), GuardError);
  EXPECT_THROW(rg::log(Interval(0.0, 1.0)), GuardError);
  EXPECT_THROW(rg::sqrt(Interval(-1.0, 1.0)), GuardError);
  EXPECT_THROW(rg::powc(Interval(0.0, 1.0), 2.5), GuardError);
  EXPECT_NO_THROW(rg::sqrt(Interval(0.0, 1.0)));
}

TEST(Interval, IntersectAndHull) {
  const Interval a(0, 2), b(1, 3);
  EXPECT_EQ(rg::intersect(a, b), Interval(1, 2));
  EXPECT_EQ(rg::hull(a, b), Interval(0, 3));
  EXPECT_THROW(rg::intersect(Interval(0, 1), Interval(2, 3)), std::logic_error);
}

TEST(IntervalSoundness, Arithmetic) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int k = 0; k < 20000; ++k) {
    double a0 = u(rng), a1 = u(rng), b0 = u(rng), b1 = u(rng);
    if (a0 > a1) std::swap(a0, a1);
    if (b0 > b1) std::swap(b0, b1);
    const Interval A(a0, a1), B(b0, b1);
    const Interval s = A + B, d = A - B, p = A * B;
    for (int q = 0; q < 5; ++q) {
      const long double x = std::min<long double>(a1, a0 + (a1 - a0) * (q / 4.0L));
      const long double y = std::min<long double>(b1, b0 + (b1 - b0) * ((4 - q) / 4.0L));
      ASSERT_TRUE(s.lo <= x + y && x + y <= s.hi);
      ASSERT_TRUE(d.lo <= x - y && x - y <= d.hi);
      ASSERT_TRUE(p.lo <= x * y && x * y <= p.hi);
      if (b0 > 0 || b1 < 0) {
        const Interval r = A / B;
        ASSERT_TRUE(r.lo <= x / y && x / y <= r.hi);
      }
    }
  }
}

TEST(IntervalSoundness, Transcendentals) {
  check_enclosure([](const Interval& x) { return rg::exp(x); }, [](long double x) { return std::exp(x); }, -30, 30,
                  4000, 1);
  check_enclosure([](const Interval& x) { return rg::log(x); }, [](long double x) { return std::log(x); }, 1e-6, 40,
                  4000, 2);
  check_enclosure([](const Interval& x) { return rg::sqrt(x); }, [](long double x) { return std::sqrt(x); }, 0, 40,
                  4000, 3);
  check_enclosure([](const Interval& x) { return rg::tanh(x); }, [](long double x) { return std::tanh(x); }, -20, 20,
                  4000, 4);
  check_enclosure([](const Interval& x) { return rg::sinh(x); }, [](long double x) { return std::sinh(x); }, -20, 20,
                  4000, 5);
  check_enclosure([](const Interval& x) { return rg::cosh(x); }, [](long double x) { return std::cosh(x); }, -20, 20,
                  4000, 6);
  check_enclosure([](const Interval& x) { return rg::sqr(x); }, [](long double x) { return x * x; }, -20, 20, 4000,
                  7);
  check_enclosure([](const Interval& x) { return rg::powc(x, -2.5); },
                  [](long double x) { return std::pow(x, -2.5L); }, 0.01, 40, 4000, 8);
  check_enclosure([](const Interval& x) { return rg::powc(x, 1.8); }, [](long double x) { return std::pow(x, 1.8L); },
                  0.01, 40, 4000, 9);
}

TEST(IntervalSoundness, SpecialPrimitives) {
  check_enclosure([](const Interval& x) { return rg::sech2(x); }, sech2_l, -25, 25, 4000, 11);
  check_enclosure([](const Interval& x) { return rg::xcsch(x); }, xcsch_l, -25, 25, 4000, 12);
  check_enclosure([](const Interval& x) { return rg::langevin(x); }, langevin_l, -25, 25, 4000, 13);
  check_enclosure([](const Interval& x) { return rg::langevin_d(x); }, langevin_d_l, -25, 25, 4000, 14);
  // Near zero, where the series branches are used.
  check_enclosure([](const Interval& x) { return rg::xcsch(x); }, xcsch_l, -0.3, 0.3, 4000, 15);
  check_enclosure([](const Interval& x) { return rg::langevin(x); }, langevin_l, -0.3, 0.3, 4000, 16);
  check_enclosure([](const Interval& x) { return rg::langevin_d(x); }, langevin_d_l, -0.3, 0.3, 4000, 17);
}

TEST(IntervalScalar, SpecialPrimitivesPointValues) {
  namespace sc = saddle::rigor::scalar;
  for (double x : {-3.0, -0.05, 0.0, 1e-7, 0.2, 1.5, 30.0}) {
    EXPECT_NEAR(sc::sech2(x), (double)sech2_l(x), 1e-15);
    EXPECT_NEAR(sc::xcsch(x), (double)xcsch_l(x), 1e-15);
    EXPECT_NEAR(sc::langevin(x), (double)langevin_l(x), 1e-15);
    EXPECT_NEAR(sc::langevin_d(x), (double)langevin_d_l(x), 1e-14);
  }
}

#include "saddlecheck/interval.hpp"

#include <algorithm>
#include <cmath>

namespace saddle::rigor {

namespace {

constexpr int kArith = 2;
constexpr int kLibm = 4;
constexpr int kComposite = 8;
constexpr double kSeriesRel = 1e-12;

double lower_rel(double x, int k, double rel) { return down(x - std::abs(x) * rel, k); }
double upper_rel(double x, int k, double rel) { return up(x + std::abs(x) * rel, k); }

// Product of endpoints where 0 * inf counts as 0 (the interval endpoint is a limit).
double prod(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

// Even function decreasing in |x|: range over x from values at the smallest and largest |x|.
template <class F>
Interval even_decreasing(const Interval& x, F f, int pad, double rel, double top) {
  const double mig = x.lo > 0.0 ? x.lo : (x.hi < 0.0 ? -x.hi : 0.0);
  const double mag = std::max(std::abs(x.lo), std::abs(x.hi));
  const double hi = mig == 0.0 ? top : upper_rel(f(mig), pad, rel);
  const double lo = lower_rel(f(mag), pad, rel);
  return {std::max(0.0, lo), std::max(hi, 0.0)};
}

}  // namespace

namespace scalar {

double sech2(double x) {
  const double e = std::exp(-2.0 * std::abs(x));
  const double d = 1.0 + e;
  return 4.0 * e / (d * d);
}

double xcsch(double x) {
  if (x == 0.0) return 1.0;
  return x / std::sinh(x);
}

double langevin(double x) {
  if (std::abs(x) < 0.1) {
    const double x2 = x * x;
    return x * (1.0 / 3 +
                x2 * (-1.0 / 45 + x2 * (2.0 / 945 + x2 * (-1.0 / 4725 + x2 * (2.0 / 93555 + x2 * (-1382.0 / 638512875))))));
  }
  return 1.0 / std::tanh(x) - 1.0 / x;
}

double langevin_d(double x) {
  if (std::abs(x) < 0.1) {
    const double x2 = x * x;
    return 1.0 / 3 +
           x2 * (-1.0 / 15 + x2 * (2.0 / 189 + x2 * (-1.0 / 675 + x2 * (2.0 / 10395 + x2 * (-15202.0 / 638512875)))));
  }
  const double s = std::sinh(x);
  return 1.0 / (x * x) - 1.0 / (s * s);
}

}  // namespace scalar

std::ostream& operator<<(std::ostream& os, const Interval& x) { return os << '[' << x.lo << ", " << x.hi << ']'; }

Interval operator+(const Interval& a, const Interval& b) {
  return {down(a.lo + b.lo, kArith), up(a.hi + b.hi, kArith)};
}

Interval operator-(const Interval& a, const Interval& b) {
  return {down(a.lo - b.hi, kArith), up(a.hi - b.lo, kArith)};
}

Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval& operator+=(Interval& a, const Interval& b) {
  a = a + b;
  return a;
}

Interval operator*(const Interval& a, const Interval& b) {
  if (a.is_point() && b.is_point()) {
    const double p = prod(a.lo, b.lo);
    return {down(p, kArith), up(p, kArith)};
  }
  const double p1 = prod(a.lo, b.lo), p2 = prod(a.lo, b.hi), p3 = prod(a.hi, b.lo), p4 = prod(a.hi, b.hi);
  const double lo = std::min(std::min(p1, p2), std::min(p3, p4));
  const double hi = std::max(std::max(p1, p2), std::max(p3, p4));
  return {down(lo, kArith), up(hi, kArith)};
}

Interval operator/(const Interval& a, const Interval& b) {
  if (!(b.lo > 0.0 || b.hi < 0.0)) throw GuardError("interval division by an interval containing zero");
  const double q1 = a.lo / b.lo, q2 = a.lo / b.hi, q3 = a.hi / b.lo, q4 = a.hi / b.hi;
  const double lo = std::min(std::min(q1, q2), std::min(q3, q4));
  const double hi = std::max(std::max(q1, q2), std::max(q3, q4));
  return {down(lo, kArith), up(hi, kArith)};
}

Interval hull(const Interval& a, const Interval& b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

Interval intersect(const Interval& a, const Interval& b) {
  const double lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
  if (!(lo <= hi)) throw std::logic_error("interval intersection is empty");
  return {lo, hi};
}

Interval sqr(const Interval& x) {
  if (x.lo >= 0.0) return {std::max(0.0, down(x.lo * x.lo, kArith)), up(x.hi * x.hi, kArith)};
  if (x.hi <= 0.0) return {std::max(0.0, down(x.hi * x.hi, kArith)), up(x.lo * x.lo, kArith)};
  const double m = std::max(-x.lo, x.hi);
  return {0.0, up(m * m, kArith)};
}

Interval sqrt(const Interval& x) {
  if (x.lo < 0.0) throw GuardError("interval sqrt of an interval with negative part");
  return {std::max(0.0, down(std::sqrt(x.lo), kArith)), up(std::sqrt(x.hi), kArith)};
}

Interval exp(const Interval& x) {
  return {std::max(0.0, down(std::exp(x.lo), kLibm)), up(std::exp(x.hi), kLibm)};
}

Interval log(const Interval& x) {
  if (!(x.lo > 0.0)) throw GuardError("interval log of a non-positive interval");
  return {down(std::log(x.lo), kLibm), up(std::log(x.hi), kLibm)};
}

Interval tanh(const Interval& x) {
  return {std::max(-1.0, down(std::tanh(x.lo), kLibm)), std::min(1.0, up(std::tanh(x.hi), kLibm))};
}

Interval sinh(const Interval& x) { return {down(std::sinh(x.lo), kLibm), up(std::sinh(x.hi), kLibm)}; }

Interval cosh(const Interval& x) {
  const double mig = x.lo > 0.0 ? x.lo : (x.hi < 0.0 ? -x.hi : 0.0);
  const double mag = std::max(std::abs(x.lo), std::abs(x.hi));
  return {std::max(1.0, down(std::cosh(mig), kLibm)), up(std::cosh(mag), kLibm)};
}

Interval powc(const Interval& x, double c) {
  if (!(x.lo > 0.0)) throw GuardError("interval pow of a non-positive base");
  if (c == 0.0) return Interval(1.0);
  const double a = std::pow(x.lo, c), b = std::pow(x.hi, c);
  return {std::max(0.0, down(std::min(a, b), kLibm)), up(std::max(a, b), kLibm)};
}

Interval sech2(const Interval& x) { return even_decreasing(x, scalar::sech2, kComposite, 0.0, 1.0); }

Interval xcsch(const Interval& x) { return even_decreasing(x, scalar::xcsch, kComposite, 0.0, 1.0); }

Interval langevin(const Interval& x) {
  const double lo = lower_rel(scalar::langevin(x.lo), kComposite, kSeriesRel);
  const double hi = upper_rel(scalar::langevin(x.hi), kComposite, kSeriesRel);
  return {std::max(-1.0, lo), std::min(1.0, hi)};
}

Interval langevin_d(const Interval& x) {
  return even_decreasing(x, scalar::langevin_d, kComposite, kSeriesRel, up(1.0 / 3.0, kArith));
}

}  // namespace saddle::rigor

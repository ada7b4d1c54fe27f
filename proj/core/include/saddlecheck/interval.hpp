#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace saddle::rigor {

// Raised when an operation's precondition cannot be certified on an interval
// (divisor containing zero, non-positive log/pow base, negative sqrt argument).
class GuardError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Outward padding by at least k ulps.
inline double down(double x, int k) {
  if (std::isinf(x) || std::isnan(x)) return x;
  return x - (k * std::abs(x) * 0x1p-51 + k * std::numeric_limits<double>::denorm_min());
}
inline double up(double x, int k) {
  if (std::isinf(x) || std::isnan(x)) return x;
  return x + (k * std::abs(x) * 0x1p-51 + k * std::numeric_limits<double>::denorm_min());
}

// Closed interval [lo, hi] with outward-padded endpoint arithmetic.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double v) : lo(v), hi(v) {}  // NOLINT: implicit point promotion
  Interval(double l, double h) : lo(l), hi(h) {
    if (!(l <= h)) throw std::invalid_argument("Interval: lo > hi");
  }

  // Enclosure of a real constant known only to within one rounding of v.
  static Interval around(double v) { return {std::nextafter(v, -INFINITY), std::nextafter(v, INFINITY)}; }
  static Interval entire() { return {-INFINITY, INFINITY}; }

  double width() const { return hi - lo; }
  double mid() const { return lo == hi ? lo : 0.5 * lo + 0.5 * hi; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool is_point() const { return lo == hi; }
};

inline bool operator==(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }
inline bool operator!=(const Interval& a, const Interval& b) { return !(a == b); }
std::ostream& operator<<(std::ostream& os, const Interval& x);

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
Interval& operator+=(Interval& a, const Interval& b);

Interval hull(const Interval& a, const Interval& b);
// Intersection; throws std::logic_error when empty (two enclosures of one quantity must overlap).
Interval intersect(const Interval& a, const Interval& b);

Interval sqr(const Interval& x);
Interval sqrt(const Interval& x);
Interval exp(const Interval& x);
Interval log(const Interval& x);
Interval tanh(const Interval& x);
Interval sinh(const Interval& x);
Interval cosh(const Interval& x);
Interval powc(const Interval& x, double c);
Interval sech2(const Interval& x);
Interval xcsch(const Interval& x);
Interval langevin(const Interval& x);
Interval langevin_d(const Interval& x);

// Scalar versions of the non-standard primitives, shared by point evaluation.
namespace scalar {
double sech2(double x);
double xcsch(double x);
double langevin(double x);
double langevin_d(double x);
}  // namespace scalar

}  // namespace saddle::rigor

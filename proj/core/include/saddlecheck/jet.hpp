#pragma once

#include <cmath>

namespace saddle {

// Second-order forward-mode jet in two variables (s, t).
struct Jet2 {
  double v = 0.0;
  double ds = 0.0, dt = 0.0;
  double dss = 0.0, dst = 0.0, dtt = 0.0;

  Jet2() = default;
  Jet2(double c) : v(c) {}  // NOLINT: implicit constant promotion
  static Jet2 var_s(double s) { Jet2 j(s); j.ds = 1.0; return j; }
  static Jet2 var_t(double t) { Jet2 j(t); j.dt = 1.0; return j; }
};

// Chain rule for a scalar function with value f0, first derivative f1 and second derivative f2.
inline Jet2 chain(const Jet2& a, double f0, double f1, double f2) {
  Jet2 r;
  r.v = f0;
  r.ds = f1 * a.ds;
  r.dt = f1 * a.dt;
  r.dss = f2 * a.ds * a.ds + f1 * a.dss;
  r.dst = f2 * a.ds * a.dt + f1 * a.dst;
  r.dtt = f2 * a.dt * a.dt + f1 * a.dtt;
  return r;
}

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.v = a.v + b.v;
  r.ds = a.ds + b.ds;
  r.dt = a.dt + b.dt;
  r.dss = a.dss + b.dss;
  r.dst = a.dst + b.dst;
  r.dtt = a.dtt + b.dtt;
  return r;
}

inline Jet2 operator-(const Jet2& a) {
  Jet2 r;
  r.v = -a.v;
  r.ds = -a.ds;
  r.dt = -a.dt;
  r.dss = -a.dss;
  r.dst = -a.dst;
  r.dtt = -a.dtt;
  return r;
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) { return a + (-b); }

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.v = a.v * b.v;
  r.ds = a.ds * b.v + a.v * b.ds;
  r.dt = a.dt * b.v + a.v * b.dt;
  r.dss = a.dss * b.v + 2.0 * a.ds * b.ds + a.v * b.dss;
  r.dst = a.dst * b.v + a.ds * b.dt + a.dt * b.ds + a.v * b.dst;
  r.dtt = a.dtt * b.v + 2.0 * a.dt * b.dt + a.v * b.dtt;
  return r;
}

inline Jet2 recip(const Jet2& a) {
  const double iv = 1.0 / a.v;
  return chain(a, iv, -iv * iv, 2.0 * iv * iv * iv);
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * recip(b); }

inline Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.v);
  return chain(a, e, e, e);
}

inline Jet2 log(const Jet2& a) { return chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }

inline Jet2 tanh(const Jet2& a) {
  const double th = std::tanh(a.v);
  const double sech2 = 1.0 - th * th;
  return chain(a, th, sech2, -2.0 * th * sech2);
}

inline Jet2 sqrt(const Jet2& a) {
  const double r = std::sqrt(a.v);
  return chain(a, r, 0.5 / r, -0.25 / (r * a.v));
}

inline Jet2 pow(const Jet2& a, double c) {
  const double p = std::pow(a.v, c);
  return chain(a, p, c * p / a.v, c * (c - 1.0) * p / (a.v * a.v));
}

}  // namespace saddle

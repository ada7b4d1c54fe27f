#include "saddlecheck/forms.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace saddle::forms {

DimensionParams DimensionParams::from_m(int m) {
  if (m < 1) throw std::invalid_argument("factor dimension m must be >= 1");
  return DimensionParams{m, 2 * m, static_cast<double>(m - 1)};
}

DimensionParams DimensionParams::from_n(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("ambient dimension n must be even and >= 2");
  return from_m(n / 2);
}

namespace {
// Extended precision keeps the st -> yz -> st round trip within 2 ulps.
constexpr long double kInvSqrt2L = 0.707106781186547524400844362104849039L;
}  // namespace

CoordYZ to_yz(CoordST p) {
  const long double s = p.s, t = p.t;
  return {static_cast<double>((s + t) * kInvSqrt2L), static_cast<double>((s - t) * kInvSqrt2L)};
}

CoordST to_st(CoordYZ p) {
  const long double y = p.y, z = p.z;
  return {static_cast<double>((y + z) * kInvSqrt2L), static_cast<double>((y - z) * kInvSqrt2L)};
}

bool in_omega(CoordST p) { return p.s > p.t && p.t > 0.0; }

double one_minus_h2(double x) {
  const double q = std::exp(-kSqrt2 * std::abs(x));
  const double d = 1.0 + q;
  return 4.0 * q / (d * d);
}

double heteroclinic(double x, int order) {
  switch (order) {
    case 0:
      return std::tanh(x * kInvSqrt2);
    case 1:
      return one_minus_h2(x) * kInvSqrt2;
    case 2:
      return -std::tanh(x * kInvSqrt2) * one_minus_h2(x);
    default:
      throw std::invalid_argument("heteroclinic: order must be 0, 1 or 2");
  }
}

double double_well(double u) {
  const double w = 1.0 - u * u;
  return 0.25 * w * w;
}

double hh_supersolution(double y, double z) { return heteroclinic(y) * heteroclinic(z); }

double log_slope(double x) {
  const double w = kSqrt2 * std::abs(x);
  if (w == 0.0) return 1.0;
  return w / std::sinh(w);
}

double subsolution_defect(double a, double yt, double zt, const DimensionParams& params) {
  if (!(a > 0.0)) throw std::domain_error("subsolution_defect: a must be positive");
  if (zt < 0.0) throw std::domain_error("subsolution_defect: z~ must be nonnegative");
  if (!(yt - zt >= 1e-6)) throw std::domain_error("subsolution_defect: too close to the cone (y~ - z~ < 1e-6)");
  const double hy = heteroclinic(yt);
  const double hz = heteroclinic(zt);
  const double ey = one_minus_h2(yt);
  const double ez = one_minus_h2(zt);
  const double a2 = a * a;
  const double potential = hy * hz * (ey * ez - (1.0 - a2) * (ey + ez));
  const double drift =
      2.0 * params.drift * a2 * hy * hz * (log_slope(yt) - log_slope(zt)) / ((yt - zt) * (yt + zt));
  return potential - drift;
}

namespace {

// log1p(q) - q/(1+q)^2, series for small q to avoid cancellation.
double tail_difference(double q) {
  if (q < 0.1) {
    double sum = 0.0;
    double qk = q * q;
    for (int k = 2; k <= 24; ++k) {
      const double c = 1.0 / k - k;
      sum += ((k % 2 == 0) ? -c : c) * qk;
      qk *= q;
    }
    return sum;
  }
  const double d = 1.0 + q;
  return std::log1p(q) - q / (d * d);
}

// Integrand inner(x)/H'(x)^2 of the outer sweep, written in q = exp(-sqrt2 x).
double outer_integrand(double x, RhoKind kind) {
  const double q = std::exp(-kSqrt2 * x);
  const double d = 1.0 + q;
  if (kind == RhoKind::rho) return (3.0 + q) * d / (6.0 * kSqrt2);
  const double v = x * kInvSqrt2;
  const double first = v * d * (3.0 + q) / 6.0;
  const double second = tail_difference(q) * d * d * d * d / (12.0 * q * q);
  return first + second;
}

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

}  // namespace

double rho_inner(double x, RhoKind kind) {
  const double q = std::exp(-kSqrt2 * x);
  const double d = 1.0 + q;
  const double poly = 4.0 * q * q * (3.0 + q) / (3.0 * d * d * d);
  if (kind == RhoKind::rho) return poly * kInvSqrt2;
  const double v = x * kInvSqrt2;
  return v * poly + 2.0 / 3.0 * tail_difference(q);
}

double rho(double z, RhoKind kind) {
  if (z < 0.0) throw std::domain_error("rho: z must be nonnegative");
  if (z == 0.0) return 0.0;
  // Split into unit panels so the absolute tolerance holds on long sweeps.
  const int panels = static_cast<int>(std::ceil(z));
  const double tol = 1e-10 / panels;
  double total = 0.0;
  auto f = [kind](double x) { return outer_integrand(x, kind); };
  for (int k = 0; k < panels; ++k) {
    const double a = z * k / panels;
    const double b = z * (k + 1) / panels;
    total += adaptive_simpson(f, a, b, tol);
  }
  return heteroclinic(z, 1) * total;
}

double g_profile(double z) { return 0.5 * (heteroclinic(z) + z * heteroclinic(z, 1)); }

}  // namespace saddle::forms

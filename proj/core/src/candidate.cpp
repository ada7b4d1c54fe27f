#include "saddlecheck/candidate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace saddle::candidate {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_positive(double s, double t) {
  if (!(s > 0.0) || !(t > 0.0)) throw std::domain_error("candidate: evaluation requires s > 0 and t > 0");
}

Partials mul(const Partials& a, const Partials& b) {
  Partials r;
  r.v = a.v * b.v;
  r.s = a.s * b.v + a.v * b.s;
  r.t = a.t * b.v + a.v * b.t;
  r.ss = a.ss * b.v + 2.0 * a.s * b.s + a.v * b.ss;
  r.st = a.st * b.v + a.s * b.t + a.t * b.s + a.v * b.st;
  r.tt = a.tt * b.v + 2.0 * a.t * b.t + a.v * b.tt;
  return r;
}

Partials add(const Partials& a, const Partials& b) {
  return {a.v + b.v, a.s + b.s, a.t + b.t, a.ss + b.ss, a.st + b.st, a.tt + b.tt};
}

Partials scale(const Partials& a, double c) {
  return {c * a.v, c * a.s, c * a.t, c * a.ss, c * a.st, c * a.tt};
}

// g(x(s,t)) from the partials of x and g', g''.
Partials compose(const Partials& x, double g0, double g1, double g2) {
  Partials r;
  r.v = g0;
  r.s = g1 * x.s;
  r.t = g1 * x.t;
  r.ss = g2 * x.s * x.s + g1 * x.ss;
  r.st = g2 * x.s * x.t + g1 * x.st;
  r.tt = g2 * x.t * x.t + g1 * x.tt;
  return r;
}

// tanh(s/t)
Partials tanh_ratio(double s, double t) {
  const double q = s / t;
  const Partials qp{q, 1.0 / t, -s / (t * t), 0.0, -1.0 / (t * t), 2.0 * s / (t * t * t)};
  const double th = std::tanh(q);
  const double ch = std::cosh(q);
  const double sech2 = 1.0 / (ch * ch);
  return compose(qp, th, sech2, -2.0 * th * sech2);
}

// s / sqrt(s^2 + t^2)
Partials s_over_r(double s, double t) {
  const double r = std::hypot(s, t);
  const double r3 = r * r * r, r5 = r3 * r * r;
  return {s / r, t * t / r3, -s * t / r3, -3.0 * s * t * t / r5, t * (2.0 * s * s - t * t) / r5,
          s * (2.0 * t * t - s * s) / r5};
}

// (1 - exp(-s/(2t))) / 4.2
Partials exp_term(double s, double t) {
  const double p = s / (2.0 * t);
  const Partials pp{p, 0.5 / t, -s / (2.0 * t * t), 0.0, -0.5 / (t * t), s / (t * t * t)};
  const double e = std::exp(-p) / 4.2;
  return compose(pp, -std::expm1(-p) / 4.2, e, -e);
}

// (s + t)^{-k}
Partials decay(double s, double t, double k) {
  const double sig = s + t;
  const double p = std::pow(sig, -k);
  const double d1 = -k * p / sig;
  const double d2 = k * (k + 1.0) * p / (sig * sig);
  return {p, d1, d1, d2, d2, d2};
}

Partials swap_negate(const Partials& f) {
  // h(s,t) = -f(t,s)
  return {-f.v, -f.t, -f.s, -f.tt, -f.st, -f.ss};
}

double drift_bracket(double a, double d, double x, double y, double u) {
  // L(x^{-a} e^{-y/3}) / (x^{-a} e^{-y/3})
  return a * (a + 1.0 - d) / (x * x) + 1.0 / 9.0 - d / (3.0 * y) + 1.0 - 3.0 * u * u;
}

void require_matching(const SaddleSolution& solution, const CandidateParams& p) {
  if (solution.params.n != p.n)
    throw std::invalid_argument("candidate: solution dimension n=" + std::to_string(solution.params.n) +
                                " does not match candidate n=" + std::to_string(p.n));
  if (!solution.has_derivatives) throw std::invalid_argument("candidate: solution has no derivative fields");
}

}  // namespace

CandidateParams CandidateParams::for_n(int n) {
  if (n != 8 && n != 10 && n != 12) throw std::invalid_argument("candidate: n must be 8, 10 or 12");
  CandidateParams p;
  p.n = n;
  p.decay_exponent = (n - 3) / 2.0;
  p.has_exp_term = n == 8;
  p.phi0_coeff = n == 8 ? 0.00007 : 0.001;
  p.phi0_exponent = n == 8 ? 1.8 : (n - 4) / 2.0;
  return p;
}

std::pair<double, double> indicial_roots(int n) {
  const double b = n - 3.0, c = n - 2.0;
  const double disc = b * b - 4.0 * c;
  if (disc < 0.0) throw std::domain_error("indicial_roots: complex roots for n=" + std::to_string(n));
  const double sq = std::sqrt(disc);
  return {(-b - sq) / 2.0, (-b + sq) / 2.0};
}

double f_eval(double s, double t, const CandidateParams& p) {
  require_positive(s, t);
  return f_generic(s, t, p);
}

double h_eval(double s, double t, const CandidateParams& p) { return -f_eval(t, s, p); }

Partials f_partials(double s, double t, const CandidateParams& p) {
  require_positive(s, t);
  Partials a = mul(tanh_ratio(s, t), s_over_r(s, t));
  if (p.has_exp_term) a = add(scale(a, forms::kSqrt2), exp_term(s, t));
  return mul(a, decay(s, t, p.decay_exponent));
}

Partials h_partials(double s, double t, const CandidateParams& p) { return swap_negate(f_partials(t, s, p)); }

CoefficientSet coefficients(double s, double t, const CandidateParams& p) {
  const Partials f = f_partials(s, t, p);
  const Partials h = h_partials(s, t, p);
  const double d = p.drift();
  CoefficientSet c;
  c.C_s = f.ss + f.tt + d / s * f.s + d / t * f.t + d / (s * s) * f.v;
  c.C_t = h.ss + h.tt + d / s * h.s + d / t * h.t + d / (t * t) * h.v;
  c.C_ss = 2.0 * f.s;
  c.C_st = 2.0 * f.t + 2.0 * h.s;
  c.C_tt = 2.0 * h.t;
  return c;
}

double phi0(double s, double t, const CandidateParams& p) {
  if (!p.include_phi0) return 0.0;
  const double a = p.phi0_exponent;
  return p.phi0_coeff * (std::pow(s, -a) * std::exp(-t / 3.0) + std::pow(t, -a) * std::exp(-s / 3.0));
}

double L_phi0(double s, double t, double u_value, const CandidateParams& p) {
  if (!p.include_phi0) return 0.0;
  const double a = p.phi0_exponent, d = p.drift();
  const double one = std::pow(s, -a) * std::exp(-t / 3.0) * drift_bracket(a, d, s, t, u_value);
  const double two = std::pow(t, -a) * std::exp(-s / 3.0) * drift_bracket(a, d, t, s, u_value);
  return p.phi0_coeff * (one + two);
}

Field phi_field(const SaddleSolution& solution, const CandidateParams& p) {
  require_matching(solution, p);
  const int n = solution.grid.N;
  Field out = Field::Constant(n + 1, n + 1, kNaN);
  for (int j = 1; j <= n; ++j)
    for (int i = 1; i <= n; ++i) {
      const double s = solution.s(i), t = solution.s(j);
      out(i, j) = f_eval(s, t, p) * solution.u_s(i, j) + h_eval(s, t, p) * solution.u_t(i, j) + phi0(s, t, p);
    }
  return out;
}

Field L_phi(const SaddleSolution& solution, const CandidateParams& p) {
  require_matching(solution, p);
  const int n = solution.grid.N;
  Field out = Field::Constant(n + 1, n + 1, kNaN);
  for (int j = 1; j <= n; ++j)
    for (int i = 1; i <= n; ++i) {
      const double s = solution.s(i), t = solution.s(j);
      const CoefficientSet c = coefficients(s, t, p);
      out(i, j) = c.C_s * solution.u_s(i, j) + c.C_st * solution.u_st(i, j) + c.C_ss * solution.u_ss(i, j) +
                  c.C_tt * solution.u_tt(i, j) + c.C_t * solution.u_t(i, j) +
                  L_phi0(s, t, solution.u(i, j), p);
    }
  return out;
}

Field L_phi_discrete(const SaddleSolution& solution, const CandidateParams& p) {
  const Field phi = phi_field(solution, p);
  const int n = solution.grid.N;
  const double h = solution.grid.h, d = p.drift();
  Field out = Field::Constant(n + 1, n + 1, kNaN);
  for (int j = 2; j < n; ++j)
    for (int i = 2; i < n; ++i) {
      const double s = solution.s(i), t = solution.s(j), c = phi(i, j), u = solution.u(i, j);
      const double lap = (phi(i + 1, j) + phi(i - 1, j) + phi(i, j + 1) + phi(i, j - 1) - 4.0 * c) / (h * h);
      const double ds = (phi(i + 1, j) - phi(i - 1, j)) / (2.0 * h);
      const double dt = (phi(i, j + 1) - phi(i, j - 1)) / (2.0 * h);
      out(i, j) = lap + d / s * ds + d / t * dt + (1.0 - 3.0 * u * u) * c;
    }
  return out;
}

const char* region_name(Region r) {
  switch (r) {
    case Region::E1: return "E1";
    case Region::E2: return "E2";
    case Region::E3: return "E3";
  }
  return "?";
}

Region region_classify(double s, double t) {
  if (t <= 0.5) return Region::E3;
  if (t > 0.65 * s) return Region::E1;
  return Region::E2;
}

double lambda_coeff(double s, double t, const CandidateParams& p) {
  return 0.5 * p.drift() * (1.0 / t - 1.0 / s);
}

double ct_over_cs(double s, double t, const CandidateParams& p) {
  const CoefficientSet c = coefficients(s, t, p);
  return c.C_t / c.C_s;
}

double css_over_gap(double s, double t, const CandidateParams& p) {
  const CoefficientSet c = coefficients(s, t, p);
  return c.C_ss / (c.C_st - c.C_tt);
}

std::optional<double> T_ratio(double s, double t, double r, const CandidateParams& p) {
  const CoefficientSet c = coefficients(s, t, p);
  const double den = c.C_s + (1.0 - r) * std::max(c.C_st - c.C_ss, 0.0) - r * c.C_t;
  if (!(den < 0.0)) return std::nullopt;
  return (1.0 - r) * c.C_ss / den;
}

}  // namespace saddle::candidate

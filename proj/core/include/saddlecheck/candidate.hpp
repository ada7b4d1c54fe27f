#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "saddlecheck/solver.hpp"

namespace saddle::candidate {

using solver::Field;
using solver::SaddleSolution;

struct CandidateParams {
  int n = 8;
  double decay_exponent = 2.5;
  double phi0_coeff = 0.00007;
  double phi0_exponent = 1.8;
  bool has_exp_term = true;
  bool include_phi0 = true;

  static CandidateParams for_n(int n);
  double drift() const { return n / 2 - 1; }
};

// Roots of a^2 + (n-3)a + (n-2) = 0, ascending.
std::pair<double, double> indicial_roots(int n);

// Closed form of f for any scalar type supporting tanh, exp, sqrt and pow.
template <class T>
T f_generic(const T& s, const T& t, const CandidateParams& p) {
  using std::exp;
  using std::pow;
  using std::sqrt;
  using std::tanh;
  const T r = sqrt(s * s + t * t);
  if (p.has_exp_term) {
    const T a = tanh(s / t) * (1.4142135623730951 * s) / r;
    const T b = (T(1.0) - exp(-s / (2.0 * t))) * (1.0 / 4.2);
    return (a + b) * pow(s + t, -p.decay_exponent);
  }
  return tanh(s / t) * s / r * pow(s + t, -p.decay_exponent);
}

struct Partials {
  double v = 0.0, s = 0.0, t = 0.0, ss = 0.0, st = 0.0, tt = 0.0;
};

// Throw std::domain_error when s <= 0 or t <= 0.
double f_eval(double s, double t, const CandidateParams& p);
double h_eval(double s, double t, const CandidateParams& p);

// Hand-derived first and second partials.
Partials f_partials(double s, double t, const CandidateParams& p);
Partials h_partials(double s, double t, const CandidateParams& p);

struct CoefficientSet {
  double C_s = 0.0, C_st = 0.0, C_ss = 0.0, C_tt = 0.0, C_t = 0.0;
};

// C_s = Delta f + (m-1) f/s^2, C_t = Delta h + (m-1) h/t^2, C_ss = 2f_s, C_st = 2f_t + 2h_s, C_tt = 2h_t.
CoefficientSet coefficients(double s, double t, const CandidateParams& p);

double phi0(double s, double t, const CandidateParams& p);
// L Phi0 with L = Delta + 1 - 3u^2, both symmetric summands.
double L_phi0(double s, double t, double u_value, const CandidateParams& p);

// Phi = f u_s + h u_t + Phi0 on the quadrant; NaN on the axes.
Field phi_field(const SaddleSolution& solution, const CandidateParams& p);

// C_s u_s + C_st u_st + C_ss u_ss + C_tt u_tt + C_t u_t + L Phi0; NaN on the axes.
// Throws std::invalid_argument if solution.params.n != p.n.
Field L_phi(const SaddleSolution& solution, const CandidateParams& p);

// Discrete L (five-point Laplacian plus drift) applied to the assembled Phi field; NaN where
// the stencil leaves the evaluated set. Used as an independent oracle for L_phi.
Field L_phi_discrete(const SaddleSolution& solution, const CandidateParams& p);

enum class Region { E1, E2, E3 };
const char* region_name(Region r);

// E3: t <= 1/2; E1: t > 1/2 and t > 0.65 s; E2: otherwise.
Region region_classify(double s, double t);

double lambda_coeff(double s, double t, const CandidateParams& p);
double ct_over_cs(double s, double t, const CandidateParams& p);
double css_over_gap(double s, double t, const CandidateParams& p);

// T(r) = (1-r) C_ss / (C_s + (1-r) max(C_st - C_ss, 0) - r C_t); empty when the denominator is >= 0.
std::optional<double> T_ratio(double s, double t, double r, const CandidateParams& p);

}  // namespace saddle::candidate

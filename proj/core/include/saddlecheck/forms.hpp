#pragma once

// Closed-form objects: heteroclinic profile, double well, comparison
// functions, the auxiliary ODE solutions rho/rho1 and coordinate maps.

namespace saddle::forms {

inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;

struct DimensionParams {
  int m = 4;
  int n = 8;
  double drift = 3.0;

  static DimensionParams from_m(int m);
  static DimensionParams from_n(int n);
};

struct CoordST {
  double s = 0.0;
  double t = 0.0;
};

struct CoordYZ {
  double y = 0.0;
  double z = 0.0;
};

CoordYZ to_yz(CoordST p);
CoordST to_st(CoordYZ p);
bool in_omega(CoordST p);

// H(x) = tanh(x/sqrt2) and its first two derivatives.
double heteroclinic(double x, int order = 0);

// 1 - H(x)^2, evaluated without cancellation for large |x|.
double one_minus_h2(double x);

double double_well(double u);

double hh_supersolution(double y, double z);

// -Delta eta - eta + eta^3 for eta = H(a y)H(a z), written in (y~, z~) = (a y, a z).
// Throws std::domain_error when y~ - z~ < 1e-6 or y~ = z~ = 0.
double subsolution_defect(double a, double yt, double zt, const DimensionParams& params);

// x H'(x) / H(x) = w / sinh(w), w = sqrt2 x; equals 1 at x = 0.
double log_slope(double x);

enum class RhoKind { rho, rho1 };

// Inner tail integrals int_x^inf H'^2 and int_x^inf s H'(s)^2 ds in closed form.
double rho_inner(double x, RhoKind kind);

// rho(z) = H'(z) int_0^z H'^-2 inner(s) ds by adaptive Simpson (tol 1e-10).
double rho(double z, RhoKind kind = RhoKind::rho);

// g(z) = (H(z) + z H'(z)) / 2
double g_profile(double z);

}  // namespace saddle::forms

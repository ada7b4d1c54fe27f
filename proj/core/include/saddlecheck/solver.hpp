#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

#include "saddlecheck/forms.hpp"
#include "saddlecheck/grid.hpp"

namespace saddle::solver {

using forms::DimensionParams;

// Fields are (N+1) x (N+1) arrays indexed (i, j) <-> (s, t) = (i h, j h).
using Field = Eigen::MatrixXd;

struct Nonlinearity {
  std::string name;
  double (*f)(double);
  double (*df)(double);
};

// u - u^3
Nonlinearity allen_cahn();
// sin(u), for the exact two-dimensional oracle
Nonlinearity sine_gordon();

struct SolverConfig {
  double newton_tol = 1e-10;
  int max_newton_iters = 50;
  int damping = 30;
  double linear_tol = 1e-10;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual(last_residual) {}
  double last_residual;
};

struct SaddleSolution {
  DimensionParams params;
  Grid grid;
  SolverConfig config;
  Field u;
  Field u_s, u_t, u_ss, u_st, u_tt, u_y, u_z;
  double residual_norm = 0.0;
  int newton_iterations = 0;
  bool has_derivatives = false;

  // Derivatives at these nodes use one-sided (extrapolated) stencils.
  bool outer_band(int i, int j) const { return i >= grid.N - 1 || j >= grid.N - 1; }
  double s(int i) const { return grid.coord(i); }
};

// Residual -Delta u - f(u) of the reduced equation at the unknown nodes of the triangle.
// Other entries are zero. Values of u at the diagonal and the outer edge act as boundary data.
Field apply_operator(const Field& u, const DimensionParams& params, const Grid& grid,
                     const Nonlinearity& nl = allen_cahn());

double unknown_max_norm(const Field& residual, const Grid& grid);

struct NewtonResult {
  Field u;
  double residual_norm = 0.0;
  int iterations = 0;
};

// Damped Newton on the unknown nodes of u0; diagonal and outer values of u0 are kept fixed.
NewtonResult newton_iterate(Field u0, const DimensionParams& params, const Grid& grid,
                            const SolverConfig& config, const Nonlinearity& nl = allen_cahn());

// Solve with Dirichlet data u = 0 on the cone, H(y)H(z) at s = R, starting from H(0.45y)H(0.45z).
// The returned u covers the full quadrant by odd reflection; derivatives are filled in.
SaddleSolution newton_solve(const DimensionParams& params, const SolverConfig& config, const Grid& grid);

// Odd reflection of a triangle field (j <= i) onto the full quadrant.
Field reflect_odd(const Field& triangle);

SaddleSolution compute_derivatives(const SaddleSolution& solution);

// u_sg(s, t) = 4 arctan(cosh(s/sqrt2)/cosh(t/sqrt2)) - pi solves -Delta u = sin u in the plane.
double sine_gordon_exact(double s, double t);

struct ConvergenceReport {
  double h_coarse = 0.0;
  double h_fine = 0.0;
  double residual_coarse = 0.0;
  double residual_fine = 0.0;
  double rate = 0.0;
};

// Discrete residual of the exact sine-Gordon saddle at h and h/2 (m = 1).
ConvergenceReport validate_exact(const Grid& grid);

struct YzResidual {
  Field residual;  // NaN where not evaluated
  int flagged = 0;  // nodes rejected by the y^2 - z^2 > delta guard
  double max_norm = 0.0;
};

// Residual of the equation in rotated coordinates,
// -u_yy - u_zz - 2(m-1)/(y^2-z^2) (y u_y - z u_z) - (u - u^3), with rotated stencils.
YzResidual residual_yz_form(const SaddleSolution& solution, double delta = 1e-12);

}  // namespace saddle::solver

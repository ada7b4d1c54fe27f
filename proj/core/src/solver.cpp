#include "saddlecheck/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <vector>

namespace saddle::solver {

namespace {

double ac_f(double u) { return u - u * u * u; }
double ac_df(double u) { return 1.0 - 3.0 * u * u; }
double sg_f(double u) { return std::sin(u); }
double sg_df(double u) { return std::cos(u); }

using SpMat = Eigen::SparseMatrix<double>;

// Residual on the unknown vector ordering.
void residual_vector(const Field& u, const DimensionParams& params, const Grid& g, const Nonlinearity& nl,
                     Eigen::VectorXd& out) {
  const double d = params.drift;
  const double ih2 = 1.0 / (g.h * g.h);
  const double ih = 1.0 / (2.0 * g.h);
  out.resize(g.unknown_count());
  for (int i = 1; i < g.N; ++i) {
    const double s = g.coord(i);
    for (int j = 0; j < i; ++j) {
      const double c = u(i, j);
      const double up = u(i + 1, j), um = u(i - 1, j);
      double lap = (up - 2.0 * c + um) * ih2 + d / s * (up - um) * ih;
      if (j > 0) {
        const double t = g.coord(j);
        const double tp = u(i, j + 1), tm = u(i, j - 1);
        lap += (tp - 2.0 * c + tm) * ih2 + d / t * (tp - tm) * ih;
      } else {
        // Even ghost u(s,-h) = u(s,h); (m-1) u_t / t -> (m-1) u_tt on the axis.
        lap += 2.0 * (1.0 + d) * (u(i, 1) - c) * ih2;
      }
      out[g.unknown_index(i, j)] = -lap - nl.f(c);
    }
  }
}

SpMat jacobian(const Field& u, const DimensionParams& params, const Grid& g, const Nonlinearity& nl) {
  const double d = params.drift;
  const double ih2 = 1.0 / (g.h * g.h);
  const double ih = 1.0 / (2.0 * g.h);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * static_cast<std::size_t>(g.unknown_count()));
  auto is_unknown = [&g](int i, int j) { return i >= 1 && i < g.N && j >= 0 && j < i; };
  for (int i = 1; i < g.N; ++i) {
    const double s = g.coord(i);
    for (int j = 0; j < i; ++j) {
      const int k = g.unknown_index(i, j);
      auto add = [&](int a, int b, double v) {
        if (is_unknown(a, b)) trip.emplace_back(k, g.unknown_index(a, b), v);
      };
      add(i + 1, j, -(ih2 + d / s * ih));
      add(i - 1, j, -(ih2 - d / s * ih));
      if (j > 0) {
        const double t = g.coord(j);
        trip.emplace_back(k, k, 4.0 * ih2 - nl.df(u(i, j)));
        add(i, j + 1, -(ih2 + d / t * ih));
        add(i, j - 1, -(ih2 - d / t * ih));
      } else {
        trip.emplace_back(k, k, 2.0 * ih2 + 2.0 * (1.0 + d) * ih2 - nl.df(u(i, j)));
        add(i, 1, -2.0 * (1.0 + d) * ih2);
      }
    }
  }
  SpMat J(g.unknown_count(), g.unknown_count());
  J.setFromTriplets(trip.begin(), trip.end());
  J.makeCompressed();
  return J;
}

void scatter(const Eigen::VectorXd& x, const Grid& g, Field& u) {
  for (int i = 1; i < g.N; ++i)
    for (int j = 0; j < i; ++j) u(i, j) = x[g.unknown_index(i, j)];
}

Eigen::VectorXd gather(const Field& u, const Grid& g) {
  Eigen::VectorXd x(g.unknown_count());
  for (int i = 1; i < g.N; ++i)
    for (int j = 0; j < i; ++j) x[g.unknown_index(i, j)] = u(i, j);
  return x;
}

}  // namespace

Nonlinearity allen_cahn() { return {"allen_cahn", ac_f, ac_df}; }
Nonlinearity sine_gordon() { return {"sine_gordon", sg_f, sg_df}; }

Field apply_operator(const Field& u, const DimensionParams& params, const Grid& grid, const Nonlinearity& nl) {
  Eigen::VectorXd r;
  residual_vector(u, params, grid, nl, r);
  Field out = Field::Zero(grid.N + 1, grid.N + 1);
  scatter(r, grid, out);
  return out;
}

double unknown_max_norm(const Field& residual, const Grid& grid) {
  double m = 0.0;
  for (int i = 1; i < grid.N; ++i)
    for (int j = 0; j < i; ++j) m = std::max(m, std::abs(residual(i, j)));
  return m;
}

NewtonResult newton_iterate(Field u, const DimensionParams& params, const Grid& g, const SolverConfig& config,
                            const Nonlinearity& nl) {
  if (!(config.newton_tol > 0.0) || config.max_newton_iters < 1)
    throw std::invalid_argument("newton_iterate: invalid solver configuration");
  Eigen::VectorXd F, Ftrial;
  residual_vector(u, params, g, nl, F);
  double norm = F.lpNorm<Eigen::Infinity>();
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;
  for (int it = 0;; ++it) {
    if (norm <= config.newton_tol) return {std::move(u), norm, it};
    if (it == config.max_newton_iters)
      throw SolverError("newton: no convergence after " + std::to_string(it) + " iterations", norm);
    const SpMat J = jacobian(u, params, g, nl);
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) throw SolverError("newton: Jacobian factorization failed", norm);
    Eigen::VectorXd dx = lu.solve(-F);
    for (int refine = 0; refine < 3; ++refine) {
      const Eigen::VectorXd lr = J * dx + F;
      if (lr.norm() <= config.linear_tol * F.norm()) break;
      dx -= lu.solve(lr);
    }
    const Eigen::VectorXd x = gather(u, g);
    double step = 1.0;
    bool accepted = false;
    Field trial = u;
    for (int halving = 0; halving <= config.damping; ++halving) {
      scatter(x + step * dx, g, trial);
      residual_vector(trial, params, g, nl, Ftrial);
      const double tn = Ftrial.lpNorm<Eigen::Infinity>();
      if (tn < norm) {
        accepted = true;
        norm = tn;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) throw SolverError("newton: line search failed", norm);
    u = std::move(trial);
    F = Ftrial;
  }
}

Field reflect_odd(const Field& triangle) {
  const Field lower = triangle.triangularView<Eigen::StrictlyLower>();
  return lower - lower.transpose();
}

SaddleSolution newton_solve(const DimensionParams& params, const SolverConfig& config, const Grid& g) {
  using forms::heteroclinic;
  using forms::kInvSqrt2;
  Field u0 = Field::Zero(g.N + 1, g.N + 1);
  for (int j = 0; j < g.N; ++j) {
    const double t = g.coord(j);
    u0(g.N, j) = heteroclinic((g.R + t) * kInvSqrt2) * heteroclinic((g.R - t) * kInvSqrt2);
  }
  for (int i = 1; i < g.N; ++i)
    for (int j = 0; j < i; ++j) {
      const double y = g.coord(i + j) * kInvSqrt2, z = g.coord(i - j) * kInvSqrt2;
      u0(i, j) = heteroclinic(0.45 * y) * heteroclinic(0.45 * z);
    }
  NewtonResult r = newton_iterate(std::move(u0), params, g, config, allen_cahn());
  SaddleSolution sol;
  sol.params = params;
  sol.grid = g;
  sol.config = config;
  sol.u = reflect_odd(r.u);
  sol.residual_norm = r.residual_norm;
  sol.newton_iterations = r.iterations;
  return compute_derivatives(sol);
}

double sine_gordon_exact(double s, double t) {
  using forms::kInvSqrt2;
  return 4.0 * std::atan(std::cosh(s * kInvSqrt2) / std::cosh(t * kInvSqrt2)) - M_PI;
}

ConvergenceReport validate_exact(const Grid& grid) {
  const auto params = DimensionParams::from_m(1);
  auto residual_at = [&params](const Grid& g) {
    Field u(g.N + 1, g.N + 1);
    for (int i = 0; i <= g.N; ++i)
      for (int j = 0; j <= g.N; ++j) u(i, j) = sine_gordon_exact(g.coord(i), g.coord(j));
    for (int i = 0; i <= g.N; ++i) u(i, i) = 0.0;
    return unknown_max_norm(apply_operator(u, params, g, sine_gordon()), g);
  };
  const Grid fine = build_grid(grid.R, grid.h / 2.0);
  ConvergenceReport rep;
  rep.h_coarse = grid.h;
  rep.h_fine = fine.h;
  rep.residual_coarse = residual_at(grid);
  rep.residual_fine = residual_at(fine);
  rep.rate = std::log2(rep.residual_coarse / rep.residual_fine);
  return rep;
}

}  // namespace saddle::solver

#include <cmath>
#include <limits>

#include "saddlecheck/solver.hpp"

namespace saddle::solver {

namespace {

// Field padded by one ghost layer: even reflection across both axes,
// quadratic extrapolation beyond the outer edge.
class Padded {
 public:
  explicit Padded(const Field& u) : n_(static_cast<int>(u.rows()) - 1), p_(n_ + 3, n_ + 3) {
    p_.block(1, 1, n_ + 1, n_ + 1) = u;
    for (int b = 0; b <= n_; ++b) p_(0, b + 1) = u(1, b);
    for (int a = 0; a <= n_; ++a) p_(a + 1, 0) = u(a, 1);
    p_(0, 0) = u(1, 1);
    for (int b = 0; b <= n_ + 1; ++b)
      p_(n_ + 2, b) = 3.0 * p_(n_ + 1, b) - 3.0 * p_(n_, b) + p_(n_ - 1, b);
    for (int a = 0; a <= n_ + 2; ++a)
      p_(a, n_ + 2) = 3.0 * p_(a, n_ + 1) - 3.0 * p_(a, n_) + p_(a, n_ - 1);
  }
  double operator()(int i, int j) const { return p_(i + 1, j + 1); }

 private:
  int n_;
  Field p_;
};

}  // namespace

SaddleSolution compute_derivatives(const SaddleSolution& solution) {
  SaddleSolution out = solution;
  const int n = solution.grid.N;
  const double h = solution.grid.h;
  const Padded p(solution.u);
  const double i2h = 1.0 / (2.0 * h);
  const double ih2 = 1.0 / (h * h);
  const double i4h2 = 1.0 / (4.0 * h * h);
  const double irot = 1.0 / (2.0 * forms::kSqrt2 * h);
  Field* fields[] = {&out.u_s, &out.u_t, &out.u_ss, &out.u_st, &out.u_tt, &out.u_y, &out.u_z};
  for (Field* f : fields) f->resize(n + 1, n + 1);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const double c = p(i, j);
      out.u_s(i, j) = (p(i + 1, j) - p(i - 1, j)) * i2h;
      out.u_t(i, j) = (p(i, j + 1) - p(i, j - 1)) * i2h;
      out.u_ss(i, j) = (p(i + 1, j) - 2.0 * c + p(i - 1, j)) * ih2;
      out.u_tt(i, j) = (p(i, j + 1) - 2.0 * c + p(i, j - 1)) * ih2;
      out.u_st(i, j) = (p(i + 1, j + 1) - p(i + 1, j - 1) - p(i - 1, j + 1) + p(i - 1, j - 1)) * i4h2;
      out.u_y(i, j) = (p(i + 1, j + 1) - p(i - 1, j - 1)) * irot;
      out.u_z(i, j) = (p(i + 1, j - 1) - p(i - 1, j + 1)) * irot;
    }
  out.has_derivatives = true;
  return out;
}

YzResidual residual_yz_form(const SaddleSolution& solution, double delta) {
  const int n = solution.grid.N;
  const double h = solution.grid.h;
  const double d = solution.params.drift;
  const Padded p(solution.u);
  const double irot = 1.0 / (2.0 * forms::kSqrt2 * h);
  const double i2h2 = 1.0 / (2.0 * h * h);
  YzResidual r;
  r.residual = Field::Constant(n + 1, n + 1, std::numeric_limits<double>::quiet_NaN());
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const double y = solution.grid.coord(i + j) * forms::kInvSqrt2;
      const double z = (solution.grid.coord(i) - solution.grid.coord(j)) * forms::kInvSqrt2;
      const double w = y * y - z * z;
      if (!(w > delta)) {
        ++r.flagged;
        continue;
      }
      if (solution.outer_band(i, j)) continue;
      const double c = p(i, j);
      const double uy = (p(i + 1, j + 1) - p(i - 1, j - 1)) * irot;
      const double uz = (p(i + 1, j - 1) - p(i - 1, j + 1)) * irot;
      const double uyy = (p(i + 1, j + 1) - 2.0 * c + p(i - 1, j - 1)) * i2h2;
      const double uzz = (p(i + 1, j - 1) - 2.0 * c + p(i - 1, j + 1)) * i2h2;
      const double res = -uyy - uzz - 2.0 * d / w * (y * uy - z * uz) - (c - c * c * c);
      r.residual(i, j) = res;
      r.max_norm = std::max(r.max_norm, std::abs(res));
    }
  return r;
}

}  // namespace saddle::solver

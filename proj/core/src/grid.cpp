#include "saddlecheck/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace saddle::solver {

Grid::NodeKind Grid::kind(int i, int j) const {
  if (i == j) return NodeKind::diagonal;
  if (i == N) return NodeKind::outer;
  if (j == 0) return NodeKind::axis;
  return NodeKind::interior;
}

std::pair<int, int> Grid::unknown_node(int k) const {
  int i = static_cast<int>((1.0 + std::sqrt(1.0 + 8.0 * k)) / 2.0);
  while (i * (i - 1) / 2 > k) --i;
  while ((i + 1) * i / 2 <= k) ++i;
  return {i, k - i * (i - 1) / 2};
}

Grid build_grid(double R, double h) {
  if (!(h > 0.0) || h > 0.2 + 1e-12) throw std::invalid_argument("build_grid: need 0 < h <= 0.2");
  if (R < 8.0) throw std::invalid_argument("build_grid: need R >= 8");
  const double ratio = R / h;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * ratio) throw std::invalid_argument("build_grid: R/h must be an integer");
  Grid g;
  g.R = R;
  g.h = h;
  g.N = static_cast<int>(n);
  return g;
}

}  // namespace saddle::solver

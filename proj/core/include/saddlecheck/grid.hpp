#pragma once

#include <utility>

namespace saddle::solver {

// Uniform lattice over the triangle {0 <= t <= s <= R}; node (i, j) sits at (s, t) = (i h, j h).
struct Grid {
  double R = 0.0;
  double h = 0.0;
  int N = 0;

  enum class NodeKind { interior, axis, diagonal, outer };

  double coord(int i) const { return i * h; }
  int quadrant_size() const { return N + 1; }
  NodeKind kind(int i, int j) const;
  bool in_triangle(int i, int j) const { return 0 <= j && j <= i && i <= N; }

  // Unknowns are the interior and axis nodes: 1 <= i <= N-1, 0 <= j < i.
  int unknown_count() const { return (N - 1) * N / 2; }
  int unknown_index(int i, int j) const { return i * (i - 1) / 2 + j; }
  std::pair<int, int> unknown_node(int k) const;

  int diagonal_count() const { return N + 1; }
  int triangle_node_count() const { return (N + 1) * (N + 2) / 2; }
};

// Requires R >= 8, 0 < h <= 0.2 and R/h integral.
Grid build_grid(double R, double h);

}  // namespace saddle::solver

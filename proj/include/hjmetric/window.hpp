#ifndef HJMETRIC_WINDOW_HPP
#define HJMETRIC_WINDOW_HPP

#include <cmath>
#include <vector>

#include "hjmetric/core.hpp"

namespace hjm {

enum class Stencil { axis, axis_diag, knight16 };

// Finite proxy for R^N (free window [-R,R]^N, absorbing boundary) or for a
// periodic cell [0,1)^N with opposite faces identified. N in {1,2}.
struct GridWindow {
  int dim = 1;
  bool periodic = false;
  double extent = 1.0;  // R for free windows; ignored (period 1) if periodic
  double h = 1.0 / 64.0;
  Stencil stencil = Stencil::axis;

  static GridWindow periodic_cell(int dim, double h, Stencil st);
  static GridWindow free_box(int dim, double R, double h, Stencil st);

  int nodes_per_axis() const;
  int node_count() const;

  // Row-major node indexing.
  int index(int i, int j = 0) const;
  void axes_of(int node, int& i, int& j) const;
  Vec coords(int node) const;

  // Nearest node to x (x reduced mod 1 per axis when periodic).
  int nearest_node(Vec x) const;

  // Shortest displacement from node u to node v (wrap-aware).
  Vec displacement(int u, int v) const;
  // Euclidean distance |displacement|.
  double distance(int u, int v) const;

  bool on_boundary(int node) const;

  // Stencil offsets in grid units for this window's dimension.
  std::vector<std::array<int, 2>> stencil_offsets() const;
};

}  // namespace hjm

#endif  // HJMETRIC_WINDOW_HPP

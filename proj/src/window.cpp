#include "hjmetric/window.hpp"

#include <algorithm>
#include <stdexcept>

namespace hjm {

GridWindow GridWindow::periodic_cell(int dim, double h, Stencil st) {
  GridWindow w;
  w.dim = dim;
  w.periodic = true;
  w.extent = 1.0;
  w.h = h;
  w.stencil = st;
  double n = 1.0 / h;
  if (dim < 1 || dim > 2) throw std::invalid_argument("GridWindow: dim must be 1 or 2");
  if (h <= 0.0 || std::fabs(n - std::round(n)) > 1e-9)
    throw std::invalid_argument("GridWindow: 1/h must be integral for a periodic cell");
  if (w.nodes_per_axis() < 2)
    throw std::invalid_argument("GridWindow: need at least 2 nodes per axis");
  return w;
}

GridWindow GridWindow::free_box(int dim, double R, double h, Stencil st) {
  GridWindow w;
  w.dim = dim;
  w.periodic = false;
  w.extent = R;
  w.h = h;
  w.stencil = st;
  double n = R / h;
  if (dim < 1 || dim > 2) throw std::invalid_argument("GridWindow: dim must be 1 or 2");
  if (R <= 0.0 || h <= 0.0 || std::fabs(n - std::round(n)) > 1e-9)
    throw std::invalid_argument("GridWindow: R/h must be integral");
  if (w.nodes_per_axis() < 2)
    throw std::invalid_argument("GridWindow: need at least 2 nodes per axis");
  return w;
}

int GridWindow::nodes_per_axis() const {
  if (periodic) return static_cast<int>(std::round(1.0 / h));
  return 2 * static_cast<int>(std::round(extent / h)) + 1;
}

int GridWindow::node_count() const {
  int n = nodes_per_axis();
  return dim == 1 ? n : n * n;
}

int GridWindow::index(int i, int j) const {
  int n = nodes_per_axis();
  return dim == 1 ? i : i * n + j;
}

void GridWindow::axes_of(int node, int& i, int& j) const {
  int n = nodes_per_axis();
  if (dim == 1) {
    i = node;
    j = 0;
  } else {
    i = node / n;
    j = node % n;
  }
}

Vec GridWindow::coords(int node) const {
  int i, j;
  axes_of(node, i, j);
  double lo = periodic ? 0.0 : -extent;
  Vec x = {lo + i * h, 0.0};
  if (dim == 2) x[1] = lo + j * h;
  return x;
}

int GridWindow::nearest_node(Vec x) const {
  int n = nodes_per_axis();
  auto clamp_axis = [&](double c) {
    if (periodic) {
      double r = c - std::floor(c);
      int i = static_cast<int>(std::round(r / h));
      return ((i % n) + n) % n;
    }
    int i = static_cast<int>(std::round((c + extent) / h));
    return std::clamp(i, 0, n - 1);
  };
  int i = clamp_axis(x[0]);
  int j = dim == 2 ? clamp_axis(x[1]) : 0;
  return index(i, j);
}

Vec GridWindow::displacement(int u, int v) const {
  Vec a = coords(u), b = coords(v);
  Vec d = b - a;
  if (periodic) {
    for (int ax = 0; ax < dim; ++ax) {
      if (d[ax] > 0.5) d[ax] -= 1.0;
      if (d[ax] < -0.5) d[ax] += 1.0;
    }
  }
  return d;
}

double GridWindow::distance(int u, int v) const { return norm(displacement(u, v)); }

bool GridWindow::on_boundary(int node) const {
  if (periodic) return false;
  int n = nodes_per_axis();
  int i, j;
  axes_of(node, i, j);
  if (i == 0 || i == n - 1) return true;
  if (dim == 2 && (j == 0 || j == n - 1)) return true;
  return false;
}

std::vector<std::array<int, 2>> GridWindow::stencil_offsets() const {
  std::vector<std::array<int, 2>> offs;
  if (dim == 1) {
    offs = {{1, 0}, {-1, 0}};
    return offs;
  }
  offs = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  if (stencil == Stencil::axis_diag || stencil == Stencil::knight16) {
    offs.push_back({1, 1});
    offs.push_back({1, -1});
    offs.push_back({-1, 1});
    offs.push_back({-1, -1});
  }
  if (stencil == Stencil::knight16) {
    offs.push_back({1, 2});
    offs.push_back({1, -2});
    offs.push_back({-1, 2});
    offs.push_back({-1, -2});
    offs.push_back({2, 1});
    offs.push_back({2, -1});
    offs.push_back({-2, 1});
    offs.push_back({-2, -1});
  }
  return offs;
}

}  // namespace hjm

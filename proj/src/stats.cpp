#include "hjmetric/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hjm {
namespace {

int window_center(const GridWindow& window) {
  Vec c = {0.0, 0.0};
  if (window.periodic) {
    c[0] = 0.5;
    if (window.dim == 2) c[1] = 0.5;
  }
  return window.nearest_node(c);
}

// Node reached from `node` by the lattice shift z (whole grid cells);
// -1 when the shift leaves a free window.
int shifted_node(const GridWindow& window, int node, Vec z) {
  const double h = window.h;
  int di = static_cast<int>(std::lround(z[0] / h));
  int dj = static_cast<int>(std::lround(z[1] / h));
  if (std::fabs(di * h - z[0]) > 1e-9 || std::fabs(dj * h - z[1]) > 1e-9)
    throw std::invalid_argument("shift is not a whole number of grid cells");
  int i, j;
  window.axes_of(node, i, j);
  int n = window.nodes_per_axis();
  int ii = i + di, jj = j + dj;
  if (window.periodic) {
    ii = ((ii % n) + n) % n;
    jj = ((jj % n) + n) % n;
  } else {
    if (ii < 0 || ii >= n) return -1;
    if (window.dim == 2 && (jj < 0 || jj >= n)) return -1;
  }
  return window.index(ii, window.dim == 2 ? jj : 0);
}

}  // namespace

Estimate volume_fraction_spatial(const RandomSetSampler& sampler, const EnvPoint& w,
                                 double r) {
  if (r <= 0.0) throw std::invalid_argument("volume_fraction_spatial: r must be > 0");
  const auto& win = sampler.window;
  int center = window_center(win);
  int inside = 0, hits = 0;
  for (int v = 0; v < win.node_count(); ++v) {
    if (win.distance(v, center) > r + 1e-12) continue;
    ++inside;
    if (sampler.predicate(win.coords(v), w)) ++hits;
  }
  Estimate est;
  if (inside == 0) return est;
  est.value = static_cast<double>(hits) / inside;
  est.stderr_value = std::sqrt(std::max(est.value * (1.0 - est.value), 0.0) / inside);
  return est;
}

Estimate volume_fraction_probabilistic(const RandomSetSampler& sampler, Vec x,
                                       int m, std::uint64_t seed) {
  if (m < 2)
    throw std::invalid_argument("volume_fraction_probabilistic: m must be >= 2");
  int hits = 0;
  for (int i = 0; i < m; ++i) {
    EnvPoint w = sample_env(*sampler.space, seed + static_cast<std::uint64_t>(i));
    if (sampler.predicate(x, w)) ++hits;
  }
  Estimate est;
  est.value = static_cast<double>(hits) / m;
  est.stderr_value = std::sqrt(std::max(est.value * (1.0 - est.value), 0.0) / m);
  return est;
}

SpreadReport spread_check(const RandomSetSampler& sampler, const EnvPoint& w,
                          double eps, const std::vector<double>& R_grid,
                          const std::vector<double>& r_grid) {
  if (R_grid.empty() || r_grid.empty())
    throw std::invalid_argument("spread_check: empty grid");
  const auto& win = sampler.window;
  std::vector<int> set_nodes;
  for (int v = 0; v < win.node_count(); ++v)
    if (sampler.predicate(win.coords(v), w)) set_nodes.push_back(v);
  if (set_nodes.empty())
    throw std::invalid_argument("spread_check: X(w) misses the window");

  std::vector<double> dist_to_set(win.node_count());
  for (int v = 0; v < win.node_count(); ++v) {
    double best = 1e300;
    for (int s : set_nodes) best = std::min(best, win.distance(v, s));
    dist_to_set[v] = best;
  }

  int center = window_center(win);
  double r = *std::max_element(r_grid.begin(), r_grid.end());

  SpreadReport rep;
  std::vector<double> Rs = R_grid;
  std::sort(Rs.begin(), Rs.end());
  for (double R : Rs) {
    int inside = 0, covered = 0;
    for (int v = 0; v < win.node_count(); ++v) {
      if (win.distance(v, center) > r + 1e-12) continue;
      ++inside;
      if (dist_to_set[v] <= R + 1e-12) ++covered;
    }
    double frac = inside > 0 ? static_cast<double>(covered) / inside : 0.0;
    rep.profile.push_back({R, frac});
    if (!rep.found && frac >= 1.0 - eps) {
      rep.found = true;
      rep.witness_R = R;
    }
  }
  return rep;
}

double ky_fan_from_samples(std::vector<double> distances) {
  if (distances.size() < 10)
    throw std::invalid_argument("ky_fan_from_samples: need at least 10 samples");
  std::sort(distances.begin(), distances.end());
  const int m = static_cast<int>(distances.size());
  // With k samples <= eps the tail probability is (m - k) / m; the smallest
  // admissible eps for that k is max(d_(k), (m - k)/m), and every such
  // candidate is attained (larger eps only shrinks the tail).
  double best = 1e300;
  for (int k = 0; k <= m; ++k) {
    double dk = k == 0 ? 0.0 : distances[k - 1];
    double tail = static_cast<double>(m - k) / m;
    best = std::min(best, std::max(dk, tail));
  }
  return best;
}

double ky_fan_distance(const TorusSpace& space,
                       const std::function<double(const EnvPoint&)>& field_distance,
                       int m, std::uint64_t seed) {
  std::vector<double> d;
  d.reserve(m);
  for (int i = 0; i < m; ++i)
    d.push_back(field_distance(sample_env(space, seed + static_cast<std::uint64_t>(i))));
  return ky_fan_from_samples(std::move(d));
}

std::vector<SublinearityPoint> sublinearity_check(
    const std::vector<std::pair<GridWindow, SubsolutionField>>& runs) {
  std::vector<SublinearityPoint> profile;
  for (const auto& [win, v] : runs) {
    int anchor = win.nearest_node({0.0, 0.0});
    SublinearityPoint pt;
    pt.R = win.extent;
    if (v[anchor] >= kUnreachable) {
      pt.ratio = kUnreachable;
      profile.push_back(pt);
      continue;
    }
    for (int node = 0; node < win.node_count(); ++node) {
      if (!win.on_boundary(node) || v[node] >= kUnreachable) continue;
      double xn = norm(win.coords(node));
      if (xn < 1e-12) continue;
      pt.ratio = std::max(pt.ratio, std::fabs(v[node] - v[anchor]) / xn);
    }
    profile.push_back(pt);
  }
  return profile;
}

bool sublinearity_pass(const std::vector<SublinearityPoint>& profile) {
  if (profile.size() < 2) return false;
  for (std::size_t i = 1; i < profile.size(); ++i)
    if (profile[i].ratio > profile[i - 1].ratio + 1e-12) return false;
  return profile.back().ratio <= 0.5 * profile.front().ratio + 1e-12;
}

double stationarity_field_check(
    const GridWindow& window, const TorusSpace& space, const EnvPoint& w, Vec z,
    const std::function<std::vector<double>(const EnvPoint&)>& builder) {
  auto base = builder(w);
  auto shifted = builder(translate(w, z, space));
  // Compare increments: v(x + z, w) - v(y + z, w) vs v(x, tau_z w) - v(y,
  // tau_z w), with y fixed at the first node whose shift stays in window.
  int ref = -1, ref_to = -1;
  for (int v = 0; v < window.node_count(); ++v) {
    int t = shifted_node(window, v, z);
    if (t >= 0 && base[t] < kUnreachable && shifted[v] < kUnreachable) {
      ref = v;
      ref_to = t;
      break;
    }
  }
  if (ref < 0)
    throw std::invalid_argument("stationarity_field_check: shift leaves the window");
  double worst = 0.0;
  for (int v = 0; v < window.node_count(); ++v) {
    int t = shifted_node(window, v, z);
    if (t < 0 || base[t] >= kUnreachable || shifted[v] >= kUnreachable) continue;
    double lhs = base[t] - base[ref_to];
    double rhs = shifted[v] - shifted[ref];
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  return worst;
}

int stationarity_set_check(
    const GridWindow& window, const TorusSpace& space, const EnvPoint& w, Vec z,
    const std::function<std::vector<int>(const EnvPoint&)>& builder) {
  auto base = builder(w);
  auto shifted = builder(translate(w, z, space));

  // X(tau_z w) should equal X(w) - z; push the shifted-environment set
  // forward by z and count the symmetric difference with the base set.
  std::vector<char> in_base(window.node_count(), 0), in_pushed(window.node_count(), 0);
  for (int v : base) in_base[v] = 1;
  for (int v : shifted) {
    int t = shifted_node(window, v, z);
    if (t >= 0) in_pushed[t] = 1;
  }
  int mismatches = 0;
  for (int v = 0; v < window.node_count(); ++v) {
    // Free window: only compare cells whose pre-image stays inside.
    if (!window.periodic && shifted_node(window, v, -z) < 0) continue;
    if (in_base[v] != in_pushed[v]) ++mismatches;
  }
  return mismatches;
}

}  // namespace hjm

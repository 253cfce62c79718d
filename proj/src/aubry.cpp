#include "hjmetric/aubry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

namespace hjm {
namespace {

// Edge lengths quantized in tenths of h so the cycle-length constraint of
// classical_aubry becomes an integer layer index.
constexpr int kLengthQuantum = 10;

int length_units(const GridWindow& window, Vec q) {
  return std::max(1, static_cast<int>(std::lround(
                         kLengthQuantum * norm(q) / window.h)));
}

}  // namespace

std::vector<int> equilibria(const GridWindow& window, const HamiltonianModel& model,
                            const EnvPoint& w, double c_f, double tol) {
  std::vector<int> out;
  for (int node = 0; node < window.node_count(); ++node) {
    double m = min_over_p(model, window.coords(node), w).second;
    if (std::fabs(m - c_f) <= tol) out.push_back(node);
  }
  return out;
}

double default_aubry_delta(const GridWindow& window) {
  double longest = 1.0;
  for (const auto& off : window.stencil_offsets()) {
    double n = std::sqrt(static_cast<double>(off[0] * off[0] + off[1] * off[1]));
    longest = std::max(longest, n);
  }
  return 3.0 * window.h * longest;
}

double default_aubry_tol(const WeightedGraph& g) {
  double max_w = 0.0;
  for (const auto& e : g.edges) max_w = std::max(max_w, std::fabs(e.weight));
  return 8.0 * g.window.h * max_w;
}

std::vector<std::pair<int, double>> classical_aubry(const WeightedGraph& g,
                                                    double delta, double tol) {
  const int n = g.num_nodes;
  const int cap = std::max(
      1, static_cast<int>(std::ceil(kLengthQuantum * delta / g.window.h - 1e-9)));
  const int layers = cap + 1;
  const int num_states = n * layers;

  std::vector<int> units(g.edges.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    units[i] = length_units(g.window, g.edges[i].q);

  std::vector<std::pair<int, double>> out;
  std::vector<double> dist(num_states);
  std::vector<char> queued(num_states);
  for (int y = 0; y < n; ++y) {
    if (!g.node_feasible.empty() && !g.node_feasible[y]) continue;
    std::fill(dist.begin(), dist.end(), kUnreachable);
    std::fill(queued.begin(), queued.end(), 0);
    // State (u, l): cheapest walk y -> u of quantized length min(l, cap).
    // The only cycles live in the saturated layer, so this SPFA terminates
    // whenever the underlying graph has no negative cycle.
    std::deque<int> queue;
    int start = y * layers;
    dist[start] = 0.0;
    queue.push_back(start);
    queued[start] = 1;
    while (!queue.empty()) {
      int s = queue.front();
      queue.pop_front();
      queued[s] = 0;
      int u = s / layers, l = s % layers;
      if (u == y && l == cap) continue;  // closed with enough length; terminal
      for (int p = g.out_offsets[u]; p < g.out_offsets[u + 1]; ++p) {
        int id = g.out_edge_ids[p];
        const auto& e = g.edges[id];
        int l2 = std::min(cap, l + units[id]);
        int s2 = e.to * layers + l2;
        double cand = dist[s] + e.weight;
        if (cand < dist[s2] - 1e-15) {
          dist[s2] = cand;
          if (!queued[s2]) {
            queue.push_back(s2);
            queued[s2] = 1;
          }
        }
      }
    }
    double cost = dist[y * layers + cap];
    if (cost <= tol) out.push_back({y, cost});
  }
  return out;
}

std::vector<double> h_t_oracle(const WeightedGraph& g, const HamiltonianModel& model,
                               const EnvPoint& w, double c, int x, int y,
                               const std::vector<double>& t_grid, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("h_t_oracle: dt must be > 0");
  SubsolutionField h;
  h.level = g.level;
  h.values.assign(g.num_nodes, kUnreachable);
  h.values[x] = 0.0;

  std::vector<double> out;
  double t = 0.0;
  for (double target : t_grid) {
    while (t + 0.5 * dt < target) {
      h = lax_oleinik_step(g, h, dt, model, w, c);
      t += dt;
    }
    out.push_back(h[y]);
  }
  return out;
}

double reach_radius(const WeightedGraph& g, const SubsolutionField& v, int x,
                    const std::vector<double>& d_to_x, double r_max, double tol) {
  if (v[x] >= kUnreachable) return 0.0;
  const int shells = static_cast<int>(std::floor(r_max / g.window.h + 1e-9));
  if (shells < 1) return 0.0;

  std::vector<double> shell_min(shells + 1, kUnreachable);
  for (int y = 0; y < g.num_nodes; ++y) {
    if (y == x || v[y] >= kUnreachable || d_to_x[y] >= kUnreachable) continue;
    double r = g.window.distance(y, x);
    int k = static_cast<int>(std::lround(r / g.window.h));
    if (k < 1 || k > shells) continue;
    shell_min[k] = std::min(shell_min[k], v[y] + d_to_x[y]);
  }

  int best = 0;
  for (int k = 1; k <= shells; ++k)
    if (shell_min[k] <= v[x] + tol) best = k;
  if (best == shells) return r_max + 1.0;  // sentinel
  return best * g.window.h;
}

ReachRadiusField reach_radius_field(const WeightedGraph& g,
                                    const SubsolutionField& v, double r_max,
                                    double tol) {
  ReachRadiusField field;
  field.r_max = r_max;
  field.values.resize(g.num_nodes);
  auto rg = reverse_graph(g);
  for (int x = 0; x < g.num_nodes; ++x) {
    auto d = shortest_distances(rg, {{x, 0.0}});
    field.values[x] = reach_radius(g, v, x, d.values, r_max, tol);
  }
  return field;
}

SubsolutionField build_vbar(const std::vector<SubsolutionField>& fields,
                            std::vector<double> weights, int anchor) {
  if (fields.empty()) throw std::invalid_argument("build_vbar: empty field list");
  const int n = fields.front().size();
  for (const auto& f : fields)
    if (f.size() != n) throw std::invalid_argument("build_vbar: size mismatch");

  if (weights.empty()) {
    weights.resize(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i)
      weights[i] = std::pow(0.5, static_cast<double>(i + 1));
  }
  if (weights.size() != fields.size())
    throw std::invalid_argument("build_vbar: weight count mismatch");
  double total = 0.0;
  for (double w : weights) {
    if (w <= 0.0) throw std::invalid_argument("build_vbar: weights must be > 0");
    total += w;
  }

  SubsolutionField out;
  out.level = fields.front().level;
  out.values.assign(n, 0.0);
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto& f = fields[i];
    if (f[anchor] >= kUnreachable)
      throw std::invalid_argument("build_vbar: field unreachable at anchor");
    double lam = weights[i] / total;
    for (int v = 0; v < n; ++v) {
      if (out.values[v] >= kUnreachable) continue;
      out.values[v] = f[v] >= kUnreachable
                          ? kUnreachable
                          : out.values[v] + lam * (f[v] - f[anchor]);
    }
  }
  return out;
}

std::vector<int> random_aubry_approx(const WeightedGraph& g, int ensemble_size,
                                     double r_max, double tol, std::uint64_t seed,
                                     const std::vector<int>& classical_nodes) {
  if (ensemble_size < 1)
    throw std::invalid_argument("random_aubry_approx: ensemble_size must be >= 1");
  const int n = g.num_nodes;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);

  int anchor = 0;
  std::vector<SubsolutionField> fields;
  for (int i = 0; i < ensemble_size; ++i) {
    int base = pick(rng);
    // Zero data on a random source set: the extension is the distance to
    // the set, so each source truncates upstream calibration and exclusion
    // of off-Aubry nodes becomes possible.
    std::vector<std::pair<int, double>> trace = {{base, 0.0}};
    int extras = 1 + pick(rng) % std::max(1, n / 4);
    for (int s = 0; s < extras; ++s) trace.push_back({pick(rng), 0.0});
    fields.push_back(lax_extension(g, trace));
    if (i == 0) {
      // vbar needs a common reachable anchor; the first base always is.
      anchor = base;
    }
  }
  bool anchor_ok = true;
  for (const auto& f : fields)
    if (f[anchor] >= kUnreachable) anchor_ok = false;
  if (anchor_ok && fields.size() > 1)
    fields.push_back(build_vbar(fields, {}, anchor));

  auto rg = reverse_graph(g);
  std::vector<int> out;
  for (int x = 0; x < n; ++x) {
    auto d = shortest_distances(rg, {{x, 0.0}});
    bool all_sentinel = true;
    for (const auto& f : fields)
      if (reach_radius(g, f, x, d.values, r_max, tol) <= r_max) {
        all_sentinel = false;
        break;
      }
    if (all_sentinel) out.push_back(x);
  }

  out.insert(out.end(), classical_nodes.begin(), classical_nodes.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<StrictnessViolation> weakly_strict_check(const WeightedGraph& g,
                                                     const SubsolutionField& v,
                                                     const std::vector<int>& region,
                                                     double margin) {
  if (region.size() > 400)
    throw std::invalid_argument("weakly_strict_check: region exceeds 400 nodes");
  std::vector<StrictnessViolation> out;
  for (int y : region) {
    if (v[y] >= kUnreachable) continue;
    auto d = shortest_distances(g, {{y, 0.0}});
    for (int x : region) {
      if (x == y || v[x] >= kUnreachable || d.values[x] >= kUnreachable) continue;
      double slack = v[x] - v[y] - d.values[x];
      if (slack >= -margin) out.push_back({x, y, slack});
    }
  }
  return out;
}

}  // namespace hjm

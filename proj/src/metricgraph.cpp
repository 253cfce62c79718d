#include "hjmetric/metricgraph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <stdexcept>

namespace hjm {
namespace {

constexpr double kNegCycleTol = 1e-12;

// Bellman-Ford (queue variant) from a virtual source connected to every node
// with weight 0.  Returns the potential, or the nodes of a negative cycle.
struct PotentialResult {
  std::vector<double> potential;
  std::vector<int> cycle;  // nonempty iff a negative cycle was found
};

PotentialResult compute_potential(const WeightedGraph& g) {
  const int n = g.num_nodes;
  PotentialResult res;
  res.potential.assign(n, 0.0);
  if (g.min_weight() >= 0.0) return res;  // all-zero potential is feasible

  std::vector<int> pred(n, -1);
  std::vector<int> relax_count(n, 0);
  std::vector<char> in_queue(n, 1);
  std::deque<int> queue;
  for (int v = 0; v < n; ++v) queue.push_back(v);

  auto extract_cycle = [&](int start) {
    // Walk predecessors until a node repeats; the repeat closes the cycle.
    std::vector<int> seen(n, 0);
    int v = start;
    while (v != -1 && !seen[v]) {
      seen[v] = 1;
      v = pred[v];
    }
    std::vector<int> cycle;
    if (v == -1) return cycle;
    int u = v;
    do {
      cycle.push_back(u);
      u = pred[u];
    } while (u != v);
    std::reverse(cycle.begin(), cycle.end());
    return cycle;
  };

  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    in_queue[u] = 0;
    for (int k = g.out_offsets[u]; k < g.out_offsets[u + 1]; ++k) {
      const auto& e = g.edges[g.out_edge_ids[k]];
      double cand = res.potential[u] + e.weight;
      if (cand < res.potential[e.to] - kNegCycleTol) {
        res.potential[e.to] = cand;
        pred[e.to] = u;
        if (++relax_count[e.to] > g.num_nodes) {
          res.cycle = extract_cycle(e.to);
          if (!res.cycle.empty()) return res;
        }
        if (!in_queue[e.to]) {
          in_queue[e.to] = 1;
          queue.push_back(e.to);
        }
      }
    }
  }
  return res;
}

struct DijkstraItem {
  double key;
  int node;
  bool operator>(const DijkstraItem& o) const { return key > o.key; }
};

// Tarjan strongly connected components, iterative.
std::vector<int> strongly_connected_components(const WeightedGraph& g, int& count) {
  const int n = g.num_nodes;
  std::vector<int> comp(n, -1), low(n, 0), idx(n, -1), stk;
  std::vector<char> on_stack(n, 0);
  int next_index = 0;
  count = 0;

  struct Frame {
    int v;
    int edge_pos;
  };
  for (int root = 0; root < n; ++root) {
    if (idx[root] != -1) continue;
    std::vector<Frame> frames{{root, g.out_offsets[root]}};
    idx[root] = low[root] = next_index++;
    stk.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.edge_pos < g.out_offsets[f.v + 1]) {
        int to = g.edges[g.out_edge_ids[f.edge_pos]].to;
        ++f.edge_pos;
        if (idx[to] == -1) {
          idx[to] = low[to] = next_index++;
          stk.push_back(to);
          on_stack[to] = 1;
          frames.push_back({to, g.out_offsets[to]});
        } else if (on_stack[to]) {
          low[f.v] = std::min(low[f.v], idx[to]);
        }
      } else {
        int v = f.v;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == idx[v]) {
          while (true) {
            int u = stk.back();
            stk.pop_back();
            on_stack[u] = 0;
            comp[u] = count;
            if (u == v) break;
          }
          ++count;
        }
      }
    }
  }
  return comp;
}

}  // namespace

void WeightedGraph::build_adjacency() {
  in_offsets.assign(num_nodes + 1, 0);
  out_offsets.assign(num_nodes + 1, 0);
  for (const auto& e : edges) {
    ++in_offsets[e.to + 1];
    ++out_offsets[e.from + 1];
  }
  for (int v = 0; v < num_nodes; ++v) {
    in_offsets[v + 1] += in_offsets[v];
    out_offsets[v + 1] += out_offsets[v];
  }
  in_edge_ids.assign(edges.size(), 0);
  out_edge_ids.assign(edges.size(), 0);
  std::vector<int> in_pos(in_offsets.begin(), in_offsets.end() - 1);
  std::vector<int> out_pos(out_offsets.begin(), out_offsets.end() - 1);
  for (int id = 0; id < static_cast<int>(edges.size()); ++id) {
    in_edge_ids[in_pos[edges[id].to]++] = id;
    out_edge_ids[out_pos[edges[id].from]++] = id;
  }
}

double WeightedGraph::min_weight() const {
  double m = 0.0;
  for (const auto& e : edges) m = std::min(m, e.weight);
  return m;
}

bool WeightedGraph::all_nodes_feasible() const {
  return std::all_of(node_feasible.begin(), node_feasible.end(),
                     [](bool b) { return b; });
}

WeightedGraph build_graph(const GridWindow& window, const HamiltonianModel& model,
                          const EnvPoint& w, double a, Vec momentum_shift) {
  WeightedGraph g;
  g.window = window;
  g.level = a;
  g.momentum_shift = momentum_shift;
  g.num_nodes = window.node_count();
  g.node_feasible.assign(g.num_nodes, false);

  const int n = window.nodes_per_axis();
  const auto offsets = window.stencil_offsets();

  // sigma_a(x, q) per node is needed once per stencil direction; cache the
  // feasibility and, for the analytic eikonal path, sqrt(a - V).
  std::vector<double> sqrt_excess(g.num_nodes, -1.0);
  for (int v = 0; v < g.num_nodes; ++v) {
    Vec x = window.coords(v);
    if (model.analytic_sigma()) {
      double s = a - model.potential_at(x, w);
      if (s >= -1e-12) {
        sqrt_excess[v] = std::sqrt(std::max(s, 0.0));
        g.node_feasible[v] = true;
      }
    } else {
      g.node_feasible[v] = min_over_p(model, x, w).second <= a + 1e-12;
    }
  }

  auto sigma_at = [&](int v, Vec q) {
    if (model.analytic_sigma()) return sqrt_excess[v] * norm(q);
    return support_sigma(model, window.coords(v), q, w, a);
  };

  for (int u = 0; u < g.num_nodes; ++u) {
    if (!g.node_feasible[u]) continue;
    int i, j;
    window.axes_of(u, i, j);
    for (const auto& off : offsets) {
      int ii = i + off[0];
      int jj = j + off[1];
      if (window.periodic) {
        ii = ((ii % n) + n) % n;
        jj = ((jj % n) + n) % n;
      } else {
        if (ii < 0 || ii >= n) continue;
        if (window.dim == 2 && (jj < 0 || jj >= n)) continue;
      }
      int v = window.index(ii, window.dim == 2 ? jj : 0);
      if (!g.node_feasible[v]) continue;
      Vec q = {off[0] * window.h, 0.0};
      if (window.dim == 2) q[1] = off[1] * window.h;
      double weight = 0.5 * (sigma_at(u, q) + sigma_at(v, q)) - dot(momentum_shift, q);
      g.edges.push_back({u, v, weight, q});
    }
  }
  g.build_adjacency();
  return g;
}

WeightedGraph make_raw_graph(int num_nodes, std::vector<GraphEdge> edges,
                             const GridWindow& window) {
  WeightedGraph g;
  g.window = window;
  g.num_nodes = num_nodes;
  g.edges = std::move(edges);
  g.node_feasible.assign(num_nodes, true);
  g.build_adjacency();
  return g;
}

MetricField shortest_distances(const WeightedGraph& g,
                               const std::vector<std::pair<int, double>>& sources) {
  if (sources.empty())
    throw std::invalid_argument("shortest_distances: empty source set");

  auto pot = compute_potential(g);
  if (!pot.cycle.empty())
    throw NegativeCycleError("shortest_distances: negative cycle", pot.cycle);
  const auto& pi = pot.potential;

  MetricField field;
  field.sources = sources;
  field.values.assign(g.num_nodes, kUnreachable);
  field.pred_edge.assign(g.num_nodes, -1);

  std::priority_queue<DijkstraItem, std::vector<DijkstraItem>, std::greater<>> heap;
  std::vector<double> key(g.num_nodes, kUnreachable);
  for (const auto& [node, offset] : sources) {
    double k = offset - pi[node];
    if (k < key[node]) {
      key[node] = k;
      field.pred_edge[node] = -1;
      heap.push({k, node});
    }
  }
  std::vector<char> done(g.num_nodes, 0);
  while (!heap.empty()) {
    auto [k, u] = heap.top();
    heap.pop();
    if (done[u] || k > key[u]) continue;
    done[u] = 1;
    for (int p = g.out_offsets[u]; p < g.out_offsets[u + 1]; ++p) {
      int id = g.out_edge_ids[p];
      const auto& e = g.edges[id];
      double reweighted = e.weight + pi[u] - pi[e.to];
      double cand = k + std::max(reweighted, 0.0);  // clip Johnson round-off
      if (cand < key[e.to]) {
        key[e.to] = cand;
        field.pred_edge[e.to] = id;
        heap.push({cand, e.to});
      }
    }
  }
  for (int v = 0; v < g.num_nodes; ++v)
    if (key[v] < kUnreachable) field.values[v] = key[v] + pi[v];
  return field;
}

std::optional<std::vector<int>> detect_negative_cycle(const WeightedGraph& g) {
  auto pot = compute_potential(g);
  if (pot.cycle.empty()) return std::nullopt;
  return pot.cycle;
}

CycleMean min_cycle_mean(const WeightedGraph& g) {
  int num_comps = 0;
  auto comp = strongly_connected_components(g, num_comps);

  const double inf = std::numeric_limits<double>::infinity();
  CycleMean best;
  best.mean = inf;

  for (int c = 0; c < num_comps; ++c) {
    std::vector<int> nodes;
    for (int v = 0; v < g.num_nodes; ++v)
      if (comp[v] == c) nodes.push_back(v);
    const int m = static_cast<int>(nodes.size());
    // Collect intra-component edges.
    std::vector<const GraphEdge*> comp_edges;
    std::vector<int> local(g.num_nodes, -1);
    for (int i = 0; i < m; ++i) local[nodes[i]] = i;
    for (const auto& e : g.edges)
      if (comp[e.from] == c && comp[e.to] == c) comp_edges.push_back(&e);
    if (comp_edges.empty()) continue;
    if (m == 1) {
      // Self-loops only.
      for (const auto* e : comp_edges)
        if (e->weight < best.mean) best = {e->weight, {e->from, e->to}};
      continue;
    }

    // Karp: D[k][v] = min weight of a walk with exactly k edges from node 0
    // of the component; parents kept for witness extraction.
    std::vector<std::vector<double>> D(m + 1, std::vector<double>(m, inf));
    std::vector<std::vector<int>> parent(m + 1, std::vector<int>(m, -1));
    D[0][0] = 0.0;
    for (int k = 1; k <= m; ++k) {
      for (const auto* e : comp_edges) {
        int u = local[e->from], v = local[e->to];
        if (D[k - 1][u] == inf) continue;
        double cand = D[k - 1][u] + e->weight;
        if (cand < D[k][v]) {
          D[k][v] = cand;
          parent[k][v] = u;
        }
      }
    }

    double comp_best = inf;
    int comp_arg = -1;
    for (int v = 0; v < m; ++v) {
      if (D[m][v] == inf) continue;
      double worst = -inf;
      for (int k = 0; k < m; ++k) {
        if (D[k][v] == inf) continue;
        worst = std::max(worst, (D[m][v] - D[k][v]) / (m - k));
      }
      if (worst < comp_best) {
        comp_best = worst;
        comp_arg = v;
      }
    }
    if (comp_arg < 0 || comp_best >= best.mean) continue;

    // Witness: the walk of m edges ending at comp_arg contains a cycle; by
    // Karp's argument some cycle on it achieves the minimum mean.  Pick the
    // cycle on the walk whose mean is smallest.
    std::vector<int> walk(m + 1);
    walk[m] = comp_arg;
    for (int k = m; k > 0; --k) walk[k - 1] = parent[k][walk[k]];
    // Edge weights along the walk for cycle-mean evaluation.
    std::vector<double> wgt(m, 0.0);
    for (int k = 0; k < m; ++k) {
      double found = inf;
      for (const auto* e : comp_edges)
        if (local[e->from] == walk[k] && local[e->to] == walk[k + 1])
          found = std::min(found, e->weight);
      wgt[k] = found;
    }
    std::vector<int> last_seen(m, -1);
    std::vector<int> cyc;
    double cyc_mean = inf;
    for (int k = 0; k <= m; ++k) {
      int v = walk[k];
      if (last_seen[v] >= 0) {
        int s = last_seen[v];
        double tot = 0.0;
        for (int t = s; t < k; ++t) tot += wgt[t];
        double mean = tot / (k - s);
        if (mean < cyc_mean) {
          cyc_mean = mean;
          cyc.assign(walk.begin() + s, walk.begin() + k + 1);
          for (auto& lv : cyc) lv = nodes[lv];
        }
      }
      last_seen[v] = k;
    }
    best.mean = comp_best;
    best.witness = cyc;
  }

  if (best.mean == inf) throw NoCycleError("min_cycle_mean: graph is acyclic");
  return best;
}

WeightedGraph reverse_graph(const WeightedGraph& g) {
  WeightedGraph r;
  r.window = g.window;
  r.level = g.level;
  r.momentum_shift = -g.momentum_shift;
  r.num_nodes = g.num_nodes;
  r.node_feasible = g.node_feasible;
  r.edges.reserve(g.edges.size());
  for (const auto& e : g.edges) r.edges.push_back({e.to, e.from, e.weight, -e.q});
  r.build_adjacency();
  return r;
}

std::vector<double> path_metric_from(const WeightedGraph& g, int source) {
  std::vector<double> dist(g.num_nodes, kUnreachable);
  std::priority_queue<DijkstraItem, std::vector<DijkstraItem>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    auto [k, u] = heap.top();
    heap.pop();
    if (k > dist[u]) continue;
    for (int p = g.out_offsets[u]; p < g.out_offsets[u + 1]; ++p) {
      const auto& e = g.edges[g.out_edge_ids[p]];
      double cand = k + norm(e.q);
      if (cand < dist[e.to]) {
        dist[e.to] = cand;
        heap.push({cand, e.to});
      }
    }
  }
  return dist;
}

}  // namespace hjm

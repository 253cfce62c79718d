#ifndef HJMETRIC_METRICGRAPH_HPP
#define HJMETRIC_METRICGRAPH_HPP

#include <optional>
#include <utility>
#include <vector>

#include "hjmetric/core.hpp"
#include "hjmetric/hamiltonian.hpp"
#include "hjmetric/window.hpp"

namespace hjm {

struct GraphEdge {
  int from = 0;
  int to = 0;
  double weight = 0.0;  // sigma_a line integral, trapezoid rule
  Vec q = {0.0, 0.0};   // displacement to - from (wrap-aware)
};

// Grid-graph discretization of a window at a fixed level a.  Edge weights
// are w(u->v) = (sigma_a(u, v-u) + sigma_a(v, v-u)) / 2 - <P, v-u>; edges
// are absent where the sublevel is empty at either endpoint.
struct WeightedGraph {
  GridWindow window;
  double level = 0.0;
  Vec momentum_shift = {0.0, 0.0};
  int num_nodes = 0;
  std::vector<GraphEdge> edges;
  std::vector<bool> node_feasible;

  // CSR over incoming edges (built once, used by field verification).
  std::vector<int> in_offsets;
  std::vector<int> in_edge_ids;
  std::vector<int> out_offsets;
  std::vector<int> out_edge_ids;

  void build_adjacency();
  double min_weight() const;
  bool all_nodes_feasible() const;
};

WeightedGraph build_graph(const GridWindow& window, const HamiltonianModel& model,
                          const EnvPoint& w, double a, Vec momentum_shift = {0.0, 0.0});

// Assemble a graph from raw edges (testing and synthetic constructions).
WeightedGraph make_raw_graph(int num_nodes, std::vector<GraphEdge> edges,
                             const GridWindow& window = GridWindow{});

struct MetricField {
  std::vector<double> values;  // +inf where unreachable
  std::vector<int> pred_edge;  // incoming edge id on a shortest path, -1 at sources
  std::vector<std::pair<int, double>> sources;  // (node, offset)
};

inline constexpr double kUnreachable = 1e300;

// Multi-source shortest paths with per-source offsets.  Negative weights are
// handled by one Bellman-Ford potential plus Johnson reweighting; throws
// NegativeCycleError if the potential computation detects a cycle.
MetricField shortest_distances(const WeightedGraph& g,
                               const std::vector<std::pair<int, double>>& sources);

// Concrete cycle of total weight < -1e-12, if one exists.
std::optional<std::vector<int>> detect_negative_cycle(const WeightedGraph& g);

struct CycleMean {
  double mean = 0.0;
  std::vector<int> witness;  // node sequence of a cycle achieving the mean
};

// Karp minimum mean over directed cycles (exact, per strongly connected
// component).  Throws NoCycleError when the graph is acyclic.
CycleMean min_cycle_mean(const WeightedGraph& g);

// Edge reversal (u,v,w) -> (v,u,w); realizes the reversed-Hamiltonian
// semidistance S_check(x,y) = S(y,x).
WeightedGraph reverse_graph(const WeightedGraph& g);

// Shortest Euclidean path length between nodes through stencil edges
// (the path metric the kappa_a Lipschitz bound refers to).
std::vector<double> path_metric_from(const WeightedGraph& g, int source);

}  // namespace hjm

#endif  // HJMETRIC_METRICGRAPH_HPP

#include "hjmetric/corrector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace hjm {
namespace {

const double kInf = std::numeric_limits<double>::infinity();

// Weight of the cheapest direct edge u -> v, or +inf.
double edge_weight(const WeightedGraph& g, int u, int v) {
  double best = kInf;
  for (int p = g.out_offsets[u]; p < g.out_offsets[u + 1]; ++p) {
    const auto& e = g.edges[g.out_edge_ids[p]];
    if (e.to == v) best = std::min(best, e.weight);
  }
  return best;
}

}  // namespace

double default_corrector_tol(const WeightedGraph& g) {
  double max_w = 0.0;
  for (const auto& e : g.edges) max_w = std::max(max_w, std::fabs(e.weight));
  return 5.0 * max_w * g.window.h;
}

SubsolutionField lax_extension(const WeightedGraph& g,
                               const std::vector<std::pair<int, double>>& trace) {
  if (trace.empty()) throw std::invalid_argument("lax_extension: empty source set");
  auto field = shortest_distances(g, trace);
  SubsolutionField out;
  out.values = std::move(field.values);
  out.level = g.level;
  return out;
}

VerifyReport verify_field(const WeightedGraph& g, const SubsolutionField& v,
                          double tol) {
  VerifyReport rep;
  rep.max_excess = -kInf;
  rep.max_deficit = -kInf;

  bool any_unreachable = false;
  for (int x = 0; x < g.num_nodes; ++x)
    if (v[x] >= kUnreachable) any_unreachable = true;

  for (int id = 0; id < static_cast<int>(g.edges.size()); ++id) {
    const auto& e = g.edges[id];
    if (v[e.from] >= kUnreachable || v[e.to] >= kUnreachable) continue;
    double excess = v[e.to] - v[e.from] - e.weight;
    if (excess > rep.max_excess) {
      rep.max_excess = excess;
      rep.worst_edge = id;
    }
  }

  for (int x = 0; x < g.num_nodes; ++x) {
    if (v[x] >= kUnreachable) {
      rep.worst_node = x;
      rep.max_deficit = kInf;
      continue;
    }
    double relax = kInf;
    for (int p = g.in_offsets[x]; p < g.in_offsets[x + 1]; ++p) {
      const auto& e = g.edges[g.in_edge_ids[p]];
      if (v[e.from] >= kUnreachable) continue;
      relax = std::min(relax, v[e.from] + e.weight);
    }
    double deficit = relax == kInf ? kInf : relax - v[x];
    if (deficit > rep.max_deficit) {
      rep.max_deficit = deficit;
      rep.worst_node = x;
    }
  }

  rep.is_subsolution = !any_unreachable && rep.max_excess <= tol;
  rep.is_corrector = rep.is_subsolution && rep.max_deficit <= tol;
  double worst = std::max({0.0, rep.max_excess, rep.max_deficit == kInf
                                                    ? kUnreachable
                                                    : rep.max_deficit});
  // Residuals are energy*length per edge; h is the shortest edge length, so
  // this converts through a unit-slope reading of the sublevel gap.
  rep.delta_level = worst / std::max(g.window.h, 1e-300);
  return rep;
}

DirichletResult dirichlet_solve(const WeightedGraph& g,
                                const std::vector<int>& interior,
                                const std::vector<std::pair<int, double>>& data,
                                const std::vector<int>& aubry_nodes,
                                bool at_critical_level, double tol) {
  if (data.empty()) throw std::invalid_argument("dirichlet_solve: no data");

  std::unordered_set<int> interior_set(interior.begin(), interior.end());
  std::unordered_set<int> data_set;
  for (const auto& [n, _] : data) data_set.insert(n);

  if (at_critical_level) {
    for (int a : aubry_nodes)
      if (interior_set.count(a) && !data_set.count(a))
        throw std::invalid_argument(
            "dirichlet_solve: U meets the Aubry set at the critical level; "
            "data on U intersect Aubry is required");
  }

  // Induced subgraph on U plus the data nodes: paths may not leave U.
  std::vector<int> region = interior;
  for (const auto& [n, _] : data)
    if (!interior_set.count(n)) region.push_back(n);
  std::vector<int> local(g.num_nodes, -1);
  for (int i = 0; i < static_cast<int>(region.size()); ++i) local[region[i]] = i;

  std::vector<GraphEdge> sub_edges;
  for (const auto& e : g.edges)
    if (local[e.from] >= 0 && local[e.to] >= 0)
      sub_edges.push_back({local[e.from], local[e.to], e.weight, e.q});
  auto sub = make_raw_graph(static_cast<int>(region.size()), std::move(sub_edges),
                            g.window);

  // Compatibility: w0(x) - w0(y) <= d(y,x) + tol among data nodes.
  for (const auto& [y, gy] : data) {
    auto d = shortest_distances(sub, {{local[y], 0.0}});
    for (const auto& [x, gx] : data) {
      if (x == y) continue;
      if (d.values[local[x]] < kUnreachable && gx - gy > d.values[local[x]] + tol)
        throw std::invalid_argument(
            "dirichlet_solve: incompatible data pair (" + std::to_string(x) +
            ", " + std::to_string(y) + ")");
    }
  }

  std::vector<std::pair<int, double>> local_sources;
  for (const auto& [n, val] : data) local_sources.push_back({local[n], val});
  auto field = shortest_distances(sub, local_sources);

  DirichletResult res;
  res.region = region;
  res.field.level = g.level;
  res.field.values.assign(g.num_nodes, kUnreachable);
  for (int i = 0; i < static_cast<int>(region.size()); ++i)
    res.field.values[region[i]] = field.values[i];
  return res;
}

ChainReport calibration_chain(const WeightedGraph& g, const SubsolutionField& v,
                              int start, int max_steps, double tol) {
  ChainReport rep;
  std::vector<char> visited(g.num_nodes, 0);
  int y = start;
  rep.nodes.push_back(y);
  visited[y] = 1;
  for (int step = 0; step < max_steps; ++step) {
    if (g.window.on_boundary(y)) {
      rep.terminated_at_window_boundary = true;
      break;
    }
    int best = -1;
    for (int p = g.in_offsets[y]; p < g.in_offsets[y + 1]; ++p) {
      const auto& e = g.edges[g.in_edge_ids[p]];
      if (v[e.from] >= kUnreachable || v[y] >= kUnreachable) continue;
      if (std::fabs(v[y] - (v[e.from] + e.weight)) <= tol)
        if (best < 0 || e.from < best) best = e.from;
    }
    if (best < 0) break;
    if (visited[best]) break;
    rep.nodes.push_back(best);
    visited[best] = 1;
    y = best;
    if (g.window.on_boundary(y)) {
      rep.terminated_at_window_boundary = true;
      break;
    }
  }
  return rep;
}

SubsolutionField lax_oleinik_step(const WeightedGraph& g, const SubsolutionField& w0,
                                  double dt, const HamiltonianModel& model,
                                  const EnvPoint& w, double c) {
  if (dt <= 0.0) throw std::invalid_argument("lax_oleinik_step: dt must be > 0");
  SubsolutionField out;
  out.level = w0.level;
  out.values.assign(g.num_nodes, kUnreachable);
  for (int x = 0; x < g.num_nodes; ++x) {
    Vec xc = g.window.coords(x);
    double best = kUnreachable;
    if (w0[x] < kUnreachable)
      best = w0[x] + dt * (legendre(model, xc, {0.0, 0.0}, w) + c);
    for (int p = g.in_offsets[x]; p < g.in_offsets[x + 1]; ++p) {
      const auto& e = g.edges[g.in_edge_ids[p]];
      if (w0[e.from] >= kUnreachable) continue;
      Vec zc = g.window.coords(e.from);
      Vec q = (1.0 / dt) * e.q;
      double cand = w0[e.from] + dt * (legendre(model, zc, q, w) + c);
      best = std::min(best, cand);
    }
    out.values[x] = best;
  }
  return out;
}

CalibratedCurve calibrated_curve(const WeightedGraph& g, const SubsolutionField& u,
                                 int x, const std::vector<int>& aubry_nodes,
                                 int max_span, double tol) {
  if (std::find(aubry_nodes.begin(), aubry_nodes.end(), x) == aubry_nodes.end())
    throw std::invalid_argument("calibrated_curve: x not in the Aubry approximation");

  auto backward = calibration_chain(g, u, x, max_span, tol);

  // Forward branch: the reversed-graph Lax extension of -u from the Aubry
  // set calibrates exactly along geodesics flowing into the set, so the
  // chain never leaves it at a zero-cost point.
  auto rg = reverse_graph(g);
  std::vector<std::pair<int, double>> check_trace;
  for (int a : aubry_nodes)
    if (u[a] < kUnreachable) check_trace.push_back({a, -u[a]});
  auto forward_field = lax_extension(rg, check_trace);
  auto forward = calibration_chain(rg, forward_field, x, max_span, tol);

  CalibratedCurve curve;
  for (auto it = backward.nodes.rbegin(); it != backward.nodes.rend(); ++it)
    curve.nodes.push_back(*it);
  for (std::size_t i = 1; i < forward.nodes.size(); ++i)
    curve.nodes.push_back(forward.nodes[i]);

  curve.times.assign(curve.nodes.size(), 0.0);
  curve.actions.assign(curve.nodes.size(), 0.0);
  for (std::size_t i = 1; i < curve.nodes.size(); ++i) {
    int a = curve.nodes[i - 1], b = curve.nodes[i];
    curve.times[i] = curve.times[i - 1] + g.window.distance(a, b);
    curve.actions[i] = curve.actions[i - 1] + edge_weight(g, a, b);
  }
  curve.total_action = curve.actions.empty() ? 0.0 : curve.actions.back();
  if (curve.nodes.size() >= 1) {
    auto d = shortest_distances(g, {{curve.nodes.front(), 0.0}});
    curve.endpoint_distance = curve.nodes.size() > 1 ? d.values[curve.nodes.back()] : 0.0;
  }
  return curve;
}

}  // namespace hjm

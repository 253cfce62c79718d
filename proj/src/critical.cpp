#include "hjmetric/critical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hjm {
namespace {

// Subsolution existence at level a: every node's sublevel is nonempty and
// the (tilted) sigma_a graph carries no negative cycle.
bool level_feasible(const GridWindow& window, const HamiltonianModel& model,
                    const EnvPoint& w, double a, Vec P, double* cycle_mean) {
  auto g = build_graph(window, model, w, a, P);
  if (cycle_mean) *cycle_mean = 0.0;
  if (!g.all_nodes_feasible()) return false;
  if (g.min_weight() >= 0.0) return true;
  bool ok = !detect_negative_cycle(g).has_value();
  if (cycle_mean && g.num_nodes <= 2048) {
    try {
      *cycle_mean = min_cycle_mean(g).mean;
    } catch (const NoCycleError&) {
    }
  }
  return ok;
}

}  // namespace

double free_critical_value(const GridWindow& window, const HamiltonianModel& model,
                           const EnvPoint& w, double tol, Vec momentum_shift,
                           std::vector<BisectionProbe>* trace) {
  if (tol <= 0.0) throw std::invalid_argument("free_critical_value: tol must be > 0");

  double lo = -std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int v = 0; v < window.node_count(); ++v) {
    Vec x = window.coords(v);
    lo = std::max(lo, min_over_p(model, x, w).second);
    // a >= H(x, P, w) everywhere puts P in every sublevel, making all tilted
    // weights nonnegative; guaranteed-feasible upper end of the bracket.
    hi = std::max(hi, eval_H(model, x, momentum_shift, w));
  }
  hi += tol;

  auto probe = [&](double a) {
    double mean = 0.0;
    bool ok = level_feasible(window, model, w, a, momentum_shift, &mean);
    if (trace) trace->push_back({a, ok, mean});
    return ok;
  };

  if (!probe(hi))
    throw BracketError("free_critical_value: upper bracket infeasible", lo, hi);
  if (probe(lo)) return lo;

  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (probe(mid))
      hi = mid;
    else
      lo = mid;
  }

  if (trace) {
    // Monotonicity certificate: every feasible probe sits above every
    // infeasible one.
    double max_bad = -std::numeric_limits<double>::infinity();
    double min_good = std::numeric_limits<double>::infinity();
    for (const auto& p : *trace) {
      if (p.feasible)
        min_good = std::min(min_good, p.level);
      else
        max_bad = std::max(max_bad, p.level);
    }
    if (max_bad > min_good + 1e-12)
      throw std::logic_error("free_critical_value: non-monotone feasibility");
  }
  return hi;
}

double effective_hamiltonian(const GridWindow& window, const HamiltonianModel& model,
                             const EnvPoint& w, Vec P, double tol) {
  return free_critical_value(window, model, w, tol, P);
}

CriticalValues stationary_critical_value(const GridWindow& window,
                                         const HamiltonianModel& model,
                                         const EnvPoint& w, double tol) {
  CriticalValues out;
  out.tolerance = tol;
  out.c_f = free_critical_value(window, model, w, tol);
  out.c = effective_hamiltonian(window, model, w, {0.0, 0.0}, tol);
  if (out.c < out.c_f - tol)
    throw std::logic_error("stationary_critical_value: c < c_f - tol");
  return out;
}

EffectiveTable sample_effective(const GridWindow& window, const HamiltonianModel& model,
                                const EnvPoint& w, const std::vector<Vec>& p_grid,
                                double tol) {
  EffectiveTable table;
  table.tolerance = tol;
  table.samples.reserve(p_grid.size());
  for (const auto& P : p_grid)
    table.samples.push_back({P, effective_hamiltonian(window, model, w, P, tol)});
  return table;
}

FlatRegion flat_region(const EffectiveTable& table, double tol) {
  // The P-grid structure is recovered from the samples: distinct sorted
  // coordinate values per axis, at least 3 each.
  std::vector<double> axis0, axis1;
  for (const auto& [P, _] : table.samples) {
    axis0.push_back(P[0]);
    axis1.push_back(P[1]);
  }
  auto dedupe = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(),
                        [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
            v.end());
  };
  dedupe(axis0);
  dedupe(axis1);
  bool two_d = axis1.size() > 1;
  if (axis0.size() < 3 || (two_d && axis1.size() < 3))
    throw std::invalid_argument("flat_region: fewer than 3 samples per axis");

  double step0 = axis0[1] - axis0[0];
  for (std::size_t i = 1; i + 1 < axis0.size(); ++i)
    step0 = std::min(step0, axis0[i + 1] - axis0[i]);
  double step1 = two_d ? axis1[1] - axis1[0] : 0.0;

  FlatRegion region;
  region.min_value = std::numeric_limits<double>::infinity();
  for (const auto& [_, h] : table.samples)
    region.min_value = std::min(region.min_value, h);

  auto in_sublevel = [&](Vec P) {
    for (const auto& [Q, h] : table.samples)
      if (norm(P - Q) < 1e-9) return h <= region.min_value + tol;
    return false;
  };

  for (const auto& [P, h] : table.samples)
    if (h <= region.min_value + tol) region.sublevel.push_back(P);

  if (in_sublevel({0.0, 0.0})) {
    region.zero_in_interior = true;
    std::vector<Vec> neighbors = {vec1(step0), vec1(-step0)};
    if (two_d) {
      neighbors.push_back(vec2(0.0, step1));
      neighbors.push_back(vec2(0.0, -step1));
    }
    for (const auto& nb : neighbors)
      if (!in_sublevel(nb)) region.zero_in_interior = false;
  }
  return region;
}

}  // namespace hjm

#ifndef HJMETRIC_CRITICAL_HPP
#define HJMETRIC_CRITICAL_HPP

#include <utility>
#include <vector>

#include "hjmetric/metricgraph.hpp"

namespace hjm {

struct CriticalValues {
  double c_f = 0.0;
  double c = 0.0;
  double tolerance = 0.0;
};

// One probe of the bisection: level tried and whether the sigma-graph at
// that level is feasible (all sublevels nonempty, no negative cycle).
struct BisectionProbe {
  double level = 0.0;
  bool feasible = false;
  double cycle_mean = 0.0;  // witness when a cycle exists; 0 on small graphs
};

struct EffectiveTable {
  std::vector<std::pair<Vec, double>> samples;  // (P, Hbar(P))
  double tolerance = 0.0;
};

struct FlatRegion {
  std::vector<Vec> sublevel;  // sampled {P : Hbar(P) <= min + tol}
  double min_value = 0.0;
  bool zero_in_interior = false;
};

// Smallest level a whose sigma_a grid graph admits a subsolution: every
// node's sublevel is nonempty and no cycle has negative total weight.
// Bisection on [max_x min_p H, max_x H(x, P, w)]; momentum_shift P tilts
// the edge weights by -<P, q> (the shifted-sublevel identity).
double free_critical_value(const GridWindow& window, const HamiltonianModel& model,
                           const EnvPoint& w, double tol,
                           Vec momentum_shift = {0.0, 0.0},
                           std::vector<BisectionProbe>* trace = nullptr);

// Critical value of H(x, p + P, w), via the tilted edge weights.
double effective_hamiltonian(const GridWindow& window, const HamiltonianModel& model,
                             const EnvPoint& w, Vec P, double tol);

// c_f together with c realized as Hbar(0); asserts c >= c_f - tol.
CriticalValues stationary_critical_value(const GridWindow& window,
                                         const HamiltonianModel& model,
                                         const EnvPoint& w, double tol);

EffectiveTable sample_effective(const GridWindow& window, const HamiltonianModel& model,
                                const EnvPoint& w, const std::vector<Vec>& p_grid,
                                double tol);

// Sampled flat region {P : Hbar(P) <= min + tol} and whether a full grid
// neighborhood of P = 0 lies inside it.  Requires >= 3 samples per axis.
FlatRegion flat_region(const EffectiveTable& table, double tol);

}  // namespace hjm

#endif  // HJMETRIC_CRITICAL_HPP

#ifndef HJMETRIC_AUBRY_HPP
#define HJMETRIC_AUBRY_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "hjmetric/corrector.hpp"
#include "hjmetric/metricgraph.hpp"

namespace hjm {

struct AubryReport {
  std::vector<int> equilibria;
  std::vector<std::pair<int, double>> classical_aubry;  // (node, min cycle cost)
  std::vector<int> random_aubry_approx;
  double level = 0.0;
  double delta = 0.0;
  double tol = 0.0;
  double r_max = 0.0;
};

// Per-node reach radius in [0, r_max]; sentinel marks "window-infinite"
// (the defining equality holds at the outermost tested shell).
struct ReachRadiusField {
  std::vector<double> values;
  double r_max = 0.0;

  double sentinel() const { return r_max + 1.0; }
  bool is_sentinel(int node) const { return values[node] > r_max; }
};

// Nodes where min_p H(x, p, w) is within tol of c_f.
std::vector<int> equilibria(const GridWindow& window, const HamiltonianModel& model,
                            const EnvPoint& w, double c_f, double tol);

// Default minimum cycle length for classical_aubry: three times the longest
// stencil edge, so back-and-forth 2-cycles never qualify by discretization.
double default_aubry_delta(const GridWindow& window);

// Cycle-cost tolerance separating vanishing loop costs (which scale like
// h * max-edge-weight near a cost-free point) from the positive gap at
// off-Aubry nodes.
double default_aubry_tol(const WeightedGraph& g);

// Nodes through which some directed cycle of Euclidean length >= delta has
// total weight <= tol, with the achieved minimum cost.  The graph must be
// built at the level under scrutiny (c_f for the classical Aubry set).
std::vector<std::pair<int, double>> classical_aubry(const WeightedGraph& g,
                                                    double delta, double tol);

// Value-iteration trajectory of h_t(x, y) = inf over curves x -> y in time t
// of the action integral of L + c; sampled at the requested multiples of dt.
std::vector<double> h_t_oracle(const WeightedGraph& g, const HamiltonianModel& model,
                               const EnvPoint& w, double c, int x, int y,
                               const std::vector<double>& t_grid, double dt);

// Largest shell radius r <= r_max with min over the shell of v(y) + d(y,x)
// within tol of v(x); d_to_x are the graph distances into x.  Returns
// r_max + 1 (the sentinel) when the outermost shell still qualifies.
double reach_radius(const WeightedGraph& g, const SubsolutionField& v, int x,
                    const std::vector<double>& d_to_x, double r_max, double tol);

ReachRadiusField reach_radius_field(const WeightedGraph& g,
                                    const SubsolutionField& v, double r_max,
                                    double tol);

// Convex combination of subsolutions, each renormalized to vanish at the
// anchor node.  Default weights are 2^{-n}, renormalized to sum to one.
SubsolutionField build_vbar(const std::vector<SubsolutionField>& fields,
                            std::vector<double> weights = {}, int anchor = 0);

// Ensemble approximation of the random Aubry set: nodes whose reach radius
// is the sentinel for every field of a randomized Lax-extension ensemble
// plus their vbar mixture.  classical_nodes (when the flat region has zero
// in its interior and c = c_f) are merged into the result.
std::vector<int> random_aubry_approx(const WeightedGraph& g, int ensemble_size,
                                     double r_max, double tol, std::uint64_t seed,
                                     const std::vector<int>& classical_nodes = {});

struct StrictnessViolation {
  int x = 0;
  int y = 0;
  double slack = 0.0;  // v(x) - v(y) - d(y,x); >= -margin when reported
};

// Pairs x != y in the region with v(x) - v(y) >= d(y,x) - margin, i.e.
// where the subsolution fails to be weakly strict.  Region capped at 400
// nodes (all-pairs distances).
std::vector<StrictnessViolation> weakly_strict_check(const WeightedGraph& g,
                                                     const SubsolutionField& v,
                                                     const std::vector<int>& region,
                                                     double margin);

}  // namespace hjm

#endif  // HJMETRIC_AUBRY_HPP

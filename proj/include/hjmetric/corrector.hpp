#ifndef HJMETRIC_CORRECTOR_HPP
#define HJMETRIC_CORRECTOR_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hjmetric/metricgraph.hpp"

namespace hjm {

// Grid values of a candidate (sub)solution at the graph's level, together
// with its Bellman residuals.
struct SubsolutionField {
  std::vector<double> values;
  double level = 0.0;

  double& operator[](int v) { return values[v]; }
  double operator[](int v) const { return values[v]; }
  int size() const { return static_cast<int>(values.size()); }
};

struct VerifyReport {
  bool is_subsolution = false;
  bool is_corrector = false;
  int worst_edge = -1;        // edge id with the largest subsolution excess
  int worst_node = -1;        // node with the largest stationarity deficit
  double max_excess = 0.0;    // max over edges of v(to) - v(from) - w
  double max_deficit = 0.0;   // max over nodes of min_in [v(u)+w] - v(x)
  double delta_level = 0.0;   // smallest delta-approximate-corrector level
};

// Residual tolerance: corrector residuals scale with the local edge weight.
double default_corrector_tol(const WeightedGraph& g);

// Lax formula u(x) = inf { g(y) + S_a(y,x) : y in C } as multi-source
// shortest paths with offsets.
SubsolutionField lax_extension(const WeightedGraph& g,
                               const std::vector<std::pair<int, double>>& trace);

VerifyReport verify_field(const WeightedGraph& g, const SubsolutionField& v,
                          double tol);

struct DirichletResult {
  SubsolutionField field;
  std::vector<int> region;  // nodes the solve covers (U plus data nodes)
};

// Dirichlet problem on an open node set U with boundary (and optional
// Aubry) data; throws std::invalid_argument carrying the violating pair
// when the data is incompatible with the graph distance, and when level
// a sits at c_f with U meeting the Aubry set but no data supplied there.
DirichletResult dirichlet_solve(const WeightedGraph& g,
                                const std::vector<int>& interior,
                                const std::vector<std::pair<int, double>>& data,
                                const std::vector<int>& aubry_nodes,
                                bool at_critical_level, double tol);

struct ChainReport {
  std::vector<int> nodes;
  bool terminated_at_window_boundary = false;
};

// Greedy predecessor chain along tight edges v(y) = v(u) + w(u,y); lowest
// node index breaks ties.  Stops at the window boundary, at a node without
// a tight in-edge, or after max_steps.
ChainReport calibration_chain(const WeightedGraph& g, const SubsolutionField& v,
                              int start, int max_steps, double tol);

// One backward step of the Lax-Oleinik semigroup over stencil neighbors:
// w'(x) = min_z [ w(z) + dt (L(z, (x-z)/dt) + c) ].
SubsolutionField lax_oleinik_step(const WeightedGraph& g, const SubsolutionField& w0,
                                  double dt, const HamiltonianModel& model,
                                  const EnvPoint& w, double c);

struct CalibratedCurve {
  std::vector<int> nodes;
  std::vector<double> times;       // cumulative Euclidean length (unit speed)
  std::vector<double> actions;     // cumulative sigma-action along the curve
  double total_action = 0.0;
  double endpoint_distance = 0.0;  // graph distance first -> last node
};

// Backward branch by calibration on u; forward branch by calibration of
// the reversed-graph extension of -u from the Aubry nodes; per-segment
// action equals endpoint distance.
CalibratedCurve calibrated_curve(const WeightedGraph& g, const SubsolutionField& u,
                                 int x, const std::vector<int>& aubry_nodes,
                                 int max_span, double tol);

}  // namespace hjm

#endif  // HJMETRIC_CORRECTOR_HPP

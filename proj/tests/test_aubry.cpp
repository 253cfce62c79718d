#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hjmetric/aubry.hpp"
#include "models.hpp"

using namespace hjm;

namespace {

struct Setup {
  HamiltonianModel model;
  GridWindow window;
  EnvPoint omega;
  WeightedGraph graph;
};

Setup pendulum_setup(double a, double h) {
  auto model = HamiltonianModel::eikonal(testmodels::pendulum_potential(), 1);
  auto win = GridWindow::periodic_cell(1, h, Stencil::axis);
  EnvPoint w = origin_env(*model.potential().space);
  auto g = build_graph(win, model, w, a);
  return {std::move(model), win, std::move(w), std::move(g)};
}

Setup flat_setup(double a, double h) {
  auto model = HamiltonianModel::eikonal(testmodels::zero_potential_1d(), 1);
  auto win = GridWindow::periodic_cell(1, h, Stencil::axis);
  EnvPoint w = origin_env(*model.potential().space);
  auto g = build_graph(win, model, w, a);
  return {std::move(model), win, std::move(w), std::move(g)};
}

bool contains(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

TEST_CASE("equilibria of the three reference models") {
  // Pendulum: min_p H = V with a unique maximum at x = 1/2.
  auto s = pendulum_setup(1.0, 1.0 / 32);
  auto eq = equilibria(s.window, s.model, s.omega, 1.0, 1e-3);
  CHECK(eq == std::vector<int>{16});

  // Zero potential: every node is an equilibrium of the critical level 0.
  auto f = flat_setup(0.0, 1.0 / 16);
  auto all = equilibria(f.window, f.model, f.omega, 0.0, 1e-3);
  CHECK(static_cast<int>(all.size()) == f.window.node_count());

  // Degenerate model: W >= 0.13 on [-1,1], so level 0 has no equilibria.
  auto m = HamiltonianModel::eikonal(testmodels::negative_quasiperiodic_potential(), 1);
  EnvPoint w = origin_env(*m.potential().space);
  auto win = GridWindow::free_box(1, 1.0, 1.0 / 32, Stencil::axis);
  CHECK(equilibria(win, m, w, 0.0, 1e-3).empty());
}

TEST_CASE("classical Aubry set of the pendulum concentrates at the equilibrium") {
  const double h = 1.0 / 64;
  auto s = pendulum_setup(1.0, h);
  auto aub = classical_aubry(s.graph, default_aubry_delta(s.window),
                             default_aubry_tol(s.graph));
  REQUIRE_FALSE(aub.empty());
  bool has_eq = false;
  for (const auto& [node, cost] : aub) {
    CHECK(std::abs(node - 32) <= 1);  // within one grid cell of x = 1/2
    CHECK(cost >= 0.0);
    CHECK(cost <= default_aubry_tol(s.graph));
    if (node == 32) has_eq = true;
  }
  CHECK(has_eq);

  // E subset of A_f (tolerance-inflated): every equilibrium is in the set.
  for (int e : equilibria(s.window, s.model, s.omega, 1.0, 1e-3)) {
    bool found = false;
    for (const auto& [node, cost] : aub) found = found || node == e;
    CHECK(found);
  }
}

TEST_CASE("classical Aubry set degenerate and supercritical cases") {
  // All weights zero: every node carries a zero-cost long cycle.
  auto f = flat_setup(0.0, 1.0 / 16);
  auto all = classical_aubry(f.graph, default_aubry_delta(f.window),
                             default_aubry_tol(f.graph));
  CHECK(static_cast<int>(all.size()) == f.graph.num_nodes);
  for (const auto& [node, cost] : all) CHECK(cost == doctest::Approx(0.0));

  // Above the critical value every cycle pays the positive sublevel gap.
  auto s = pendulum_setup(1.2, 1.0 / 64);
  CHECK(classical_aubry(s.graph, default_aubry_delta(s.window),
                        default_aubry_tol(s.graph))
            .empty());
}

TEST_CASE("h_t oracle: stationary curves cost nothing") {
  auto s = pendulum_setup(1.0, 1.0 / 16);
  auto at_eq = h_t_oracle(s.graph, s.model, s.omega, 1.0, 8, 8, {0.5, 1.0, 2.0},
                          1.0 / 32);
  for (double v : at_eq) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));

  auto f = flat_setup(0.0, 1.0 / 16);
  auto flat_vals = h_t_oracle(f.graph, f.model, f.omega, 0.0, 5, 5, {0.5, 1.0},
                              1.0 / 32);
  for (double v : flat_vals) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(
      h_t_oracle(s.graph, s.model, s.omega, 1.0, 0, 0, {1.0}, 0.0),
      std::invalid_argument);
}

TEST_CASE("h_t oracle: loops away from the Aubry set stay expensive") {
  auto s = pendulum_setup(1.0, 1.0 / 16);
  auto vals = h_t_oracle(s.graph, s.model, s.omega, 1.0, 0, 0, {0.5, 1.0, 2.0},
                         1.0 / 32);
  for (double v : vals) CHECK(v >= 0.1);
}

TEST_CASE("h_t approaches the graph distance from above") {
  const double h = 1.0 / 16;
  auto s = pendulum_setup(1.0, h);
  double d = shortest_distances(s.graph, {{0, 0.0}}).values[8];
  double dt = h / std::sqrt(2.0);
  auto vals = h_t_oracle(s.graph, s.model, s.omega, 1.0, 0, 8, {0.5, 1.0, 2.0, 4.0},
                         dt);
  for (std::size_t i = 1; i < vals.size(); ++i) CHECK(vals[i] <= vals[i - 1] + 1e-12);
  double best = *std::min_element(vals.begin(), vals.end());
  CHECK(best >= d - 0.01);
  CHECK(best <= d + 0.09);
}

TEST_CASE("reach radius on the flat ring") {
  const double h = 1.0 / 16;
  auto f = flat_setup(1.0, h);
  auto v = lax_extension(f.graph, {{0, 0.0}});
  auto rg = reverse_graph(f.graph);

  auto d4 = shortest_distances(rg, {{4, 0.0}});
  CHECK(reach_radius(f.graph, v, 4, d4.values, 6.0 * h, 1e-9) ==
        doctest::Approx(0.25));

  auto d0 = shortest_distances(rg, {{0, 0.0}});
  CHECK(reach_radius(f.graph, v, 0, d0.values, 6.0 * h, 1e-9) == 0.0);
}

TEST_CASE("reach radius field: degenerate sentinel and strict zero") {
  // Zero metric: the constant field reaches every shell.
  auto f = flat_setup(0.0, 1.0 / 16);
  SubsolutionField zero;
  zero.level = 0.0;
  zero.values.assign(f.graph.num_nodes, 0.0);
  auto field = reach_radius_field(f.graph, zero, 4.0 / 16, 1e-12);
  for (int x = 0; x < f.graph.num_nodes; ++x) {
    CHECK(field.is_sentinel(x));
    CHECK(field.values[x] == doctest::Approx(field.sentinel()));
  }

  // Positive gap: the null field reaches no shell at all.
  auto s = pendulum_setup(1.2, 1.0 / 32);
  SubsolutionField null_field;
  null_field.level = 1.2;
  null_field.values.assign(s.graph.num_nodes, 0.0);
  auto strict = reach_radius_field(s.graph, null_field, 4.0 / 32, 1e-9);
  for (int x = 0; x < s.graph.num_nodes; ++x) CHECK(strict.values[x] == 0.0);
}

TEST_CASE("vbar construction rules") {
  auto s = pendulum_setup(1.2, 1.0 / 32);
  auto v1 = lax_extension(s.graph, {{3, 0.0}});
  auto v2 = lax_extension(s.graph, {{20, 0.0}});

  auto single = build_vbar({v1});
  for (int x = 0; x < s.graph.num_nodes; ++x)
    CHECK(single[x] == doctest::Approx(v1[x] - v1[0]).epsilon(1e-12));

  auto mean = build_vbar({v1, v2}, {1.0, 1.0});
  for (int x = 0; x < s.graph.num_nodes; ++x)
    CHECK(mean[x] == doctest::Approx(0.5 * (v1[x] - v1[0]) + 0.5 * (v2[x] - v2[0]))
                         .epsilon(1e-12));
  // Convexity: residuals no worse than the worst input.
  double tol = default_corrector_tol(s.graph);
  auto r1 = verify_field(s.graph, v1, tol);
  auto r2 = verify_field(s.graph, v2, tol);
  auto rm = verify_field(s.graph, mean, tol);
  CHECK(rm.max_excess <= std::max(r1.max_excess, r2.max_excess) + 1e-12);

  CHECK_THROWS_AS(build_vbar({}), std::invalid_argument);
  CHECK_THROWS_AS(build_vbar({v1, v2}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_vbar({v1, v2}, {1.0, -1.0}), std::invalid_argument);
  SubsolutionField bad;
  bad.values = {kUnreachable, 0.0};
  SubsolutionField other;
  other.values = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(build_vbar({bad, other}), std::invalid_argument);
  CHECK_THROWS_AS(build_vbar({bad}), std::invalid_argument);
}

TEST_CASE("vbar reach radius never exceeds the members' radii") {
  const double h = 1.0 / 32;
  auto s = pendulum_setup(1.2, h);
  auto v1 = lax_extension(s.graph, {{3, 0.0}});
  auto v2 = lax_extension(s.graph, {{20, 0.0}});
  auto vbar = build_vbar({v1, v2});
  double r_max = 4.0 * h;
  auto r1 = reach_radius_field(s.graph, v1, r_max, 1e-9);
  auto r2 = reach_radius_field(s.graph, v2, r_max, 1e-9);
  auto rb = reach_radius_field(s.graph, vbar, r_max, 1e-9);
  for (int x = 0; x < s.graph.num_nodes; ++x) {
    if (rb.is_sentinel(x)) {
      CHECK(r1.is_sentinel(x));
      CHECK(r2.is_sentinel(x));
    } else {
      CHECK(rb.values[x] <=
            std::min(r1.values[x], r2.values[x]) + h + 1e-12);
    }
  }
}

TEST_CASE("random Aubry approximation localizes at the pendulum equilibrium") {
  const double h = 1.0 / 32;
  auto s = pendulum_setup(1.0, h);
  double tol = 1.2 * M_PI * h * h;
  auto set = random_aubry_approx(s.graph, 24, h, tol, 7);
  REQUIRE_FALSE(set.empty());
  CHECK(contains(set, 16));
  for (int x : set) CHECK(std::abs(x - 16) <= 1);

  // Reversal invariance up to a grid cell.
  auto rev = random_aubry_approx(reverse_graph(s.graph), 24, h, tol, 7);
  CHECK(contains(rev, 16));
  for (int x : rev) CHECK(std::abs(x - 16) <= 1);
}

TEST_CASE("random Aubry approximation: degenerate and supercritical cases") {
  auto f = flat_setup(0.0, 1.0 / 16);
  auto all = random_aubry_approx(f.graph, 8, 4.0 / 16, 1e-12, 11);
  CHECK(static_cast<int>(all.size()) == f.graph.num_nodes);

  const double h = 1.0 / 32;
  auto s = pendulum_setup(1.2, h);
  CHECK(random_aubry_approx(s.graph, 24, 8.0 * h, 1e-4, 13).empty());

  CHECK_THROWS_AS(random_aubry_approx(s.graph, 0, 4.0 * h, 1e-4, 1),
                  std::invalid_argument);

  // Classical nodes are merged, sorted, and deduplicated.
  auto merged = random_aubry_approx(s.graph, 24, 8.0 * h, 1e-4, 13, {5, 2, 5});
  CHECK(merged == std::vector<int>{2, 5});
}

TEST_CASE("superlevel sets of the reach radius are nested") {
  const double h = 1.0 / 32;
  auto s = pendulum_setup(1.0, h);
  auto v = lax_extension(s.graph, {{16, 0.0}});
  auto field = reach_radius_field(s.graph, v, 6.0 * h, 1.2 * M_PI * h * h);
  std::size_t prev = s.graph.num_nodes + 1;
  for (double alpha : {0.0, h, 2.0 * h, 4.0 * h, 6.0 * h}) {
    std::size_t count = 0;
    for (int x = 0; x < s.graph.num_nodes; ++x)
      if (field.values[x] >= alpha) ++count;
    CHECK(count <= prev);
    prev = count;
  }
}

TEST_CASE("weak strictness report") {
  auto s = pendulum_setup(1.2, 1.0 / 32);
  std::vector<int> region;
  for (int x = 0; x < s.graph.num_nodes; ++x) region.push_back(x);

  SubsolutionField zero;
  zero.level = 1.2;
  zero.values.assign(s.graph.num_nodes, 0.0);
  CHECK(weakly_strict_check(s.graph, zero, region, 1e-6).empty());

  // A distance field is calibrated along every geodesic: violations appear.
  auto v = lax_extension(s.graph, {{0, 0.0}});
  auto viol = weakly_strict_check(s.graph, v, region, 1e-9);
  REQUIRE_FALSE(viol.empty());
  bool through_source = false;
  for (const auto& p : viol) {
    CHECK(p.slack <= 1e-9);
    CHECK(p.slack >= -1e-9);
    if (p.y == 0) through_source = true;
  }
  CHECK(through_source);

  CHECK(weakly_strict_check(s.graph, zero, {}, 1e-6).empty());

  auto big = pendulum_setup(1.2, 1.0 / 512);
  std::vector<int> huge;
  for (int x = 0; x < big.graph.num_nodes; ++x) huge.push_back(x);
  SubsolutionField z2;
  z2.values.assign(big.graph.num_nodes, 0.0);
  CHECK_THROWS_AS(weakly_strict_check(big.graph, z2, huge, 1e-6),
                  std::invalid_argument);
}

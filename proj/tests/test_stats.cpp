#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hjmetric/stats.hpp"
#include "models.hpp"

using namespace hjm;

namespace {

double frac(double t) { return t - std::floor(t); }

RandomSetSampler threshold_sampler(double cut) {
  RandomSetSampler s;
  s.space = testmodels::unit_space_1d();
  s.window = GridWindow::periodic_cell(1, 1.0 / 128, Stencil::axis);
  s.predicate = [cut](Vec x, const EnvPoint& w) {
    return frac(x[0] + w.coords[0]) < cut;
  };
  return s;
}

}  // namespace

TEST_CASE("spatial volume fraction") {
  RandomSetSampler all;
  all.space = testmodels::unit_space_1d();
  all.window = GridWindow::periodic_cell(1, 1.0 / 32, Stencil::axis);
  all.predicate = [](Vec, const EnvPoint&) { return true; };
  EnvPoint w = origin_env(*all.space);
  auto est = volume_fraction_spatial(all, w, 0.2);
  CHECK(est.value == 1.0);
  CHECK(est.stderr_value == 0.0);
  CHECK_THROWS_AS(volume_fraction_spatial(all, w, 0.0), std::invalid_argument);

  // Half-cell threshold set {V_p > 1/2} = (1/4, 3/4): fraction 1/2.
  RandomSetSampler half;
  half.space = all.space;
  half.window = GridWindow::periodic_cell(1, 1.0 / 128, Stencil::axis);
  half.predicate = [](Vec x, const EnvPoint&) {
    return testmodels::pendulum_v(x[0]) > 0.5;
  };
  auto hf = volume_fraction_spatial(half, w, 0.5);
  CHECK(hf.value == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("probabilistic volume fraction matches the torus measure") {
  auto s = threshold_sampler(0.3);
  auto est = volume_fraction_probabilistic(s, vec1(0.0), 2000, 99);
  CHECK(std::fabs(est.value - 0.3) <= 4.0 * est.stderr_value + 1e-12);
  CHECK(est.stderr_value == doctest::Approx(std::sqrt(est.value * (1 - est.value) / 2000)));
  CHECK_THROWS_AS(volume_fraction_probabilistic(s, vec1(0.0), 1, 1),
                  std::invalid_argument);
}

TEST_CASE("spatial and probabilistic estimates agree (ergodicity)") {
  // Irrational frequency: the spatial orbit equidistributes on the torus.
  auto basis = generate_frequencies(1, FrequencyFamily::user_list, 1,
                                    {vec1(std::sqrt(2.0))});
  auto space = std::make_shared<TorusSpace>(TorusSpace{std::move(basis)});
  RandomSetSampler s;
  s.space = space;
  s.window = GridWindow::free_box(1, 8.0, 1.0 / 16, Stencil::axis);
  s.predicate = [](Vec x, const EnvPoint& w) {
    return frac(std::sqrt(2.0) * x[0] + w.coords[0]) < 0.3;
  };
  EnvPoint w = sample_env(*space, 4);
  auto sp = volume_fraction_spatial(s, w, 8.0);
  auto pr = volume_fraction_probabilistic(s, vec1(0.0), 4000, 17);
  double joint = 3.0 * (sp.stderr_value + pr.stderr_value);
  CHECK(std::fabs(sp.value - pr.value) <= joint + 0.01);
}

TEST_CASE("spread check finds the covering radius") {
  // X = multiples of 1/4 on the ring: farthest point sits at distance 1/8.
  RandomSetSampler s;
  s.space = testmodels::unit_space_1d();
  s.window = GridWindow::periodic_cell(1, 1.0 / 32, Stencil::axis);
  s.predicate = [](Vec x, const EnvPoint&) {
    double m = frac(4.0 * x[0]);
    return std::min(m, 1.0 - m) < 1e-9;
  };
  EnvPoint w = origin_env(*s.space);
  std::vector<double> R_grid;
  for (int k = 1; k <= 8; ++k) R_grid.push_back(k / 32.0);
  auto rep = spread_check(s, w, 0.01, R_grid, {0.5});
  CHECK(rep.found);
  CHECK(rep.witness_R == doctest::Approx(0.125));
  for (std::size_t i = 1; i < rep.profile.size(); ++i)
    CHECK(rep.profile[i].second >= rep.profile[i - 1].second - 1e-12);

  // X = everything: the smallest tested radius already covers.
  RandomSetSampler all = s;
  all.predicate = [](Vec, const EnvPoint&) { return true; };
  auto easy = spread_check(all, w, 0.01, R_grid, {0.5});
  CHECK(easy.found);
  CHECK(easy.witness_R == doctest::Approx(R_grid.front()));

  // A single point cannot cover the ring at the tested radii.
  RandomSetSampler point = s;
  point.predicate = [](Vec x, const EnvPoint&) { return std::fabs(x[0]) < 1e-9; };
  auto stuck = spread_check(point, w, 0.01, R_grid, {0.5});
  CHECK_FALSE(stuck.found);

  // Empty set is an error.
  RandomSetSampler none = s;
  none.predicate = [](Vec, const EnvPoint&) { return false; };
  CHECK_THROWS_AS(spread_check(none, w, 0.01, R_grid, {0.5}),
                  std::invalid_argument);
}

TEST_CASE("Ky Fan estimator closed forms") {
  std::vector<double> zeros(100, 0.0);
  CHECK(ky_fan_from_samples(zeros) == 0.0);

  std::vector<double> constant(100, 0.3);
  CHECK(ky_fan_from_samples(constant) == doctest::Approx(0.3));

  std::vector<double> half;
  for (int i = 0; i < 50; ++i) half.push_back(0.0);
  for (int i = 0; i < 50; ++i) half.push_back(1.0);
  CHECK(ky_fan_from_samples(half) == doctest::Approx(0.5));

  CHECK_THROWS_AS(ky_fan_from_samples({0.1, 0.2}), std::invalid_argument);

  // Shrinking all distances cannot increase the estimate.
  std::vector<double> sample, shrunk;
  for (int i = 0; i < 64; ++i) {
    sample.push_back(i / 64.0);
    shrunk.push_back(0.5 * i / 64.0);
  }
  CHECK(ky_fan_from_samples(shrunk) <= ky_fan_from_samples(sample) + 1e-12);
}

TEST_CASE("Ky Fan distance over sampled environments") {
  auto space = testmodels::unit_space_1d();

  auto zero = [](const EnvPoint&) { return 0.0; };
  CHECK(ky_fan_distance(*space, zero, 500, 3) == 0.0);

  auto constant = [](const EnvPoint&) { return 0.3; };
  CHECK(ky_fan_distance(*space, constant, 500, 3) == doctest::Approx(0.3));

  // d(w) = w_0 uniform on [0,1): P(d > eps) = 1 - eps, fixed point 0.5.
  auto uniform = [](const EnvPoint& w) { return w.coords[0]; };
  CHECK(ky_fan_distance(*space, uniform, 2000, 3) ==
        doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("sublinearity profiles") {
  std::vector<std::pair<GridWindow, SubsolutionField>> sub, lin, flat;
  for (double R : {1.0, 2.0, 4.0}) {
    auto win = GridWindow::free_box(1, R, 1.0 / 8, Stencil::axis);
    SubsolutionField root, plane, zero;
    root.values.resize(win.node_count());
    plane.values.resize(win.node_count());
    zero.values.assign(win.node_count(), 0.0);
    for (int v = 0; v < win.node_count(); ++v) {
      double x = win.coords(v)[0];
      root.values[v] = std::sqrt(std::fabs(x));
      plane.values[v] = std::fabs(x);
    }
    sub.push_back({win, root});
    lin.push_back({win, plane});
    flat.push_back({win, zero});
  }
  auto p_sub = sublinearity_check(sub);
  CHECK(p_sub.size() == 3);
  CHECK(p_sub[0].ratio == doctest::Approx(1.0));
  CHECK(p_sub[2].ratio == doctest::Approx(0.5));
  CHECK(sublinearity_pass(p_sub));

  auto p_lin = sublinearity_check(lin);
  CHECK(p_lin[2].ratio == doctest::Approx(1.0));
  CHECK_FALSE(sublinearity_pass(p_lin));

  CHECK(sublinearity_pass(sublinearity_check(flat)));
  CHECK_FALSE(sublinearity_pass({}));
}

TEST_CASE("stationarity of field increments under lattice shifts") {
  auto model = testmodels::pendulum_potential();
  auto space = model.space;
  auto win = GridWindow::periodic_cell(1, 1.0 / 32, Stencil::axis);
  EnvPoint w = sample_env(*space, 5);

  auto builder = [&](const EnvPoint& env) {
    std::vector<double> out(win.node_count());
    for (int v = 0; v < win.node_count(); ++v)
      out[v] = evaluate_ap(model, win.coords(v), env);
    return out;
  };
  Vec z = vec1(3.0 / 32);
  CHECK(stationarity_field_check(win, *space, w, z, builder) <= 1e-9);

  // Quasi-periodic model on a free window.
  auto qp = testmodels::negative_quasiperiodic_potential();
  auto fwin = GridWindow::free_box(1, 1.0, 1.0 / 32, Stencil::axis);
  EnvPoint qw = sample_env(*qp.space, 8);
  auto qbuilder = [&](const EnvPoint& env) {
    std::vector<double> out(fwin.node_count());
    for (int v = 0; v < fwin.node_count(); ++v)
      out[v] = evaluate_ap(qp, fwin.coords(v), env);
    return out;
  };
  CHECK(stationarity_field_check(fwin, *qp.space, qw, vec1(4.0 / 32), qbuilder) <=
        1e-9);

  // A builder that ignores the environment is caught.
  auto frozen = builder(w);
  auto broken = [&](const EnvPoint&) { return frozen; };
  CHECK(stationarity_field_check(win, *space, w, vec1(8.0 / 32), broken) >= 0.1);

  // Shifts must be whole grid cells.
  CHECK_THROWS_AS(stationarity_field_check(win, *space, w, vec1(0.7 / 32), builder),
                  std::invalid_argument);
}

TEST_CASE("stationarity of threshold sets under lattice shifts") {
  auto model = testmodels::pendulum_potential();
  auto space = model.space;
  auto win = GridWindow::periodic_cell(1, 1.0 / 64, Stencil::axis);
  EnvPoint w = sample_env(*space, 21);

  auto set_builder = [&](const EnvPoint& env) {
    std::vector<int> nodes;
    for (int v = 0; v < win.node_count(); ++v)
      if (evaluate_ap(model, win.coords(v), env) > 0.5) nodes.push_back(v);
    return nodes;
  };
  CHECK(stationarity_set_check(win, *space, w, vec1(5.0 / 64), set_builder) == 0);

  auto frozen = set_builder(w);
  auto broken = [&](const EnvPoint&) { return frozen; };
  CHECK(stationarity_set_check(win, *space, w, vec1(16.0 / 64), broken) > 0);

  // Free window: comparison restricted to cells that stay inside.
  auto qp = testmodels::negative_quasiperiodic_potential();
  auto fwin = GridWindow::free_box(1, 1.0, 1.0 / 32, Stencil::axis);
  EnvPoint qw = sample_env(*qp.space, 2);
  auto qset = [&](const EnvPoint& env) {
    std::vector<int> nodes;
    for (int v = 0; v < fwin.node_count(); ++v)
      if (evaluate_ap(qp, fwin.coords(v), env) > -0.8) nodes.push_back(v);
    return nodes;
  };
  CHECK(stationarity_set_check(fwin, *qp.space, qw, vec1(4.0 / 32), qset) == 0);
}

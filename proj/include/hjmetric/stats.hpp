#ifndef HJMETRIC_STATS_HPP
#define HJMETRIC_STATS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "hjmetric/corrector.hpp"
#include "hjmetric/env.hpp"
#include "hjmetric/window.hpp"

namespace hjm {

// Threshold random set X(w) = {x : predicate(x, w)}; stationarity is
// inherited from the stationary field behind the predicate.
struct RandomSetSampler {
  std::function<bool(Vec x, const EnvPoint& w)> predicate;
  GridWindow window;
  std::shared_ptr<const TorusSpace> space;
};

struct Estimate {
  double value = 0.0;
  double stderr_value = 0.0;
};

// |X(w) ∩ B_r| / |B_r| by grid counting over the ball around the window
// center.
Estimate volume_fraction_spatial(const RandomSetSampler& sampler, const EnvPoint& w,
                                 double r);

// Frequency of independent environment samples with x ∈ X(w); binomial
// standard error.
Estimate volume_fraction_probabilistic(const RandomSetSampler& sampler, Vec x,
                                       int m, std::uint64_t seed);

struct SpreadReport {
  double witness_R = 0.0;
  bool found = false;
  std::vector<std::pair<double, double>> profile;  // (R, covered fraction)
};

// Smallest R in R_grid with |(X(w) + B_R) ∩ B_r| / |B_r| >= 1 - eps at the
// largest r of r_grid.  Throws when X(w) misses the window entirely.
SpreadReport spread_check(const RandomSetSampler& sampler, const EnvPoint& w,
                          double eps, const std::vector<double>& R_grid,
                          const std::vector<double>& r_grid);

// Smallest eps with empirical P(d > eps) <= eps, exact from the sorted
// sample.
double ky_fan_from_samples(std::vector<double> distances);

// Ky Fan estimate for the pseudo-distance of two random fields: samples m
// environments and feeds the per-sample distances to the exact estimator.
double ky_fan_distance(const TorusSpace& space,
                       const std::function<double(const EnvPoint&)>& field_distance,
                       int m, std::uint64_t seed);

struct SublinearityPoint {
  double R = 0.0;
  double ratio = 0.0;  // max over boundary of |v(x) - v(0)| / |x|
};

// Boundary growth profile of a field over nested free windows.
std::vector<SublinearityPoint> sublinearity_check(
    const std::vector<std::pair<GridWindow, SubsolutionField>>& runs);

// Pass rule: profile nonincreasing and final ratio <= half the initial one.
bool sublinearity_pass(const std::vector<SublinearityPoint>& profile);

// Sup-norm discrepancy between increments of builder(w) shifted by z and
// increments of builder(translate(w, z)); zero for exactly stationary
// constructions.  The shift must be a whole number of grid cells.
double stationarity_field_check(
    const GridWindow& window, const TorusSpace& space, const EnvPoint& w, Vec z,
    const std::function<std::vector<double>(const EnvPoint&)>& builder);

// Symmetric-difference cell count between builder(w) shifted by z and
// builder(translate(w, z)).
int stationarity_set_check(
    const GridWindow& window, const TorusSpace& space, const EnvPoint& w, Vec z,
    const std::function<std::vector<int>(const EnvPoint&)>& builder);

}  // namespace hjm

#endif  // HJMETRIC_STATS_HPP

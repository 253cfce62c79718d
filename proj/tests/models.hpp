#ifndef TESTS_MODELS_HPP
#define TESTS_MODELS_HPP

#include <cmath>
#include <memory>
#include <vector>

#include "hjmetric/hamiltonian.hpp"

namespace testmodels {

inline std::shared_ptr<const hjm::TorusSpace> unit_space_1d() {
  auto basis = hjm::generate_frequencies(1, hjm::FrequencyFamily::user_list, 1,
                                         {hjm::vec1(1.0)});
  return std::make_shared<hjm::TorusSpace>(hjm::TorusSpace{std::move(basis)});
}

// V(x) = 1/2 (1 - cos 2 pi x); max 1 at x = 1/2, min 0 at x = 0.
inline hjm::APSeriesModel pendulum_potential() {
  hjm::APSeriesModel m;
  m.constant = 0.5;
  m.terms = {{-0.5, 0, 0.0}};
  m.space = unit_space_1d();
  return m;
}

inline hjm::APSeriesModel zero_potential_1d() {
  hjm::APSeriesModel m;
  m.constant = 0.0;
  m.space = unit_space_1d();
  return m;
}

inline std::shared_ptr<const hjm::TorusSpace> unit_space_2d() {
  auto basis = hjm::generate_frequencies(
      2, hjm::FrequencyFamily::user_list, 2, {hjm::vec2(1.0, 0.0), hjm::vec2(0.0, 1.0)});
  return std::make_shared<hjm::TorusSpace>(hjm::TorusSpace{std::move(basis)});
}

inline hjm::APSeriesModel zero_potential_2d() {
  hjm::APSeriesModel m;
  m.constant = 0.0;
  m.space = unit_space_2d();
  return m;
}

// V(x1, x2) = V_p(x1) + V_p(x2) with the pendulum profile on each axis.
inline hjm::APSeriesModel separable_potential_2d() {
  hjm::APSeriesModel m;
  m.constant = 1.0;
  m.terms = {{-0.5, 0, 0.0}, {-0.5, 1, 0.0}};
  m.space = unit_space_2d();
  return m;
}

// Degenerate scenario: H = p^2 - W with W = 1 + cos(2 pi x)/2
// + cos(2 sqrt2 pi x)/2 > 0 everywhere, inf W = 0 unattained.
inline hjm::APSeriesModel negative_quasiperiodic_potential() {
  auto basis = hjm::generate_frequencies(
      2, hjm::FrequencyFamily::user_list, 1,
      {hjm::vec1(1.0), hjm::vec1(std::sqrt(2.0))});
  hjm::APSeriesModel m;
  m.constant = -1.0;
  m.terms = {{-0.5, 0, 0.0}, {-0.5, 1, 0.0}};
  m.space = std::make_shared<hjm::TorusSpace>(hjm::TorusSpace{std::move(basis)});
  return m;
}

inline double quasiperiodic_w(double x) {
  return 1.0 + 0.5 * std::cos(2.0 * M_PI * x) +
         0.5 * std::cos(2.0 * std::sqrt(2.0) * M_PI * x);
}

inline double pendulum_v(double x) { return 0.5 * (1.0 - std::cos(2.0 * M_PI * x)); }

// Composite-Simpson oracle for integral_0^1 sqrt(max(E - V_p, 0)) dx; for
// E >= 1 this is the momentum of the pendulum cell problem at energy E.
inline double pendulum_momentum_oracle(double E, int panels = 4096) {
  auto f = [E](double x) { return std::sqrt(std::max(E - pendulum_v(x), 0.0)); };
  double h = 1.0 / panels;
  double s = f(0.0) + f(1.0);
  for (int i = 1; i < panels; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

// Inverse of the momentum map: energy E >= 1 with integral = target.
inline double pendulum_energy_oracle(double target) {
  double lo = 1.0, hi = 1.0;
  while (pendulum_momentum_oracle(hi) < target) hi = 2.0 * hi + 1.0;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    (pendulum_momentum_oracle(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace testmodels

#endif  // TESTS_MODELS_HPP

#ifndef HJMETRIC_ENV_HPP
#define HJMETRIC_ENV_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hjmetric/core.hpp"

namespace hjm {

// Stationary ergodic environments realized on a truncated product torus T^k
// with the translation action (tau_x w)_j = w_j + <lambda_j, x> (mod 1).

enum class FrequencyFamily { sqrt_primes, user_list };

struct FrequencyBasis {
  std::vector<Vec> vectors;  // lambda_1..lambda_k, cycles per unit length
  int space_dim = 1;         // dimension N of the spatial variable
  std::string family_tag;

  int size() const { return static_cast<int>(vectors.size()); }
};

// sqrt_primes: components are square roots of consecutive primes, which are
// rationally independent by construction (no floating-point test exists, so
// none is attempted).
FrequencyBasis generate_frequencies(int k, FrequencyFamily family,
                                    int space_dim = 1,
                                    const std::vector<Vec>& user = {});

struct TorusSpace {
  FrequencyBasis basis;

  int k() const { return basis.size(); }
  int space_dim() const { return basis.space_dim; }
};

// A point of the truncated torus: k coordinates in [0,1), arithmetic mod 1.
struct EnvPoint {
  std::vector<double> coords;

  int k() const { return static_cast<int>(coords.size()); }
};

EnvPoint origin_env(const TorusSpace& space);

EnvPoint translate(const EnvPoint& w, Vec x, const TorusSpace& space);

// d(w,w') = sum_n 2^{-n} dist_T1(w_n, w'_n), bounded by 1/2.
double torus_distance(const EnvPoint& w, const EnvPoint& wp);

// Coordinates i.i.d. uniform on [0,1); deterministic per seed.
EnvPoint sample_env(const TorusSpace& space, std::uint64_t seed);

// Trigonometric polynomial V(x,w) = constant
//   + sum_i amplitude_i * cos(2 pi (<lambda_{j_i}, x> + w_{j_i} + phase_i)).
struct APTerm {
  double amplitude = 0.0;
  int freq_index = 0;
  double phase = 0.0;  // in [0,1)
};

struct APSeriesModel {
  double constant = 0.0;
  std::vector<APTerm> terms;
  std::shared_ptr<const TorusSpace> space;

  // sum |amplitude|; |V - constant| is bounded by this.
  double amplitude_bound() const;
  double min_bound() const { return constant - amplitude_bound(); }
  double max_bound() const { return constant + amplitude_bound(); }
};

double evaluate_ap(const APSeriesModel& model, Vec x, const EnvPoint& w);

// Character test function a * cos(2 pi m w_j) + c; its exact torus mean is c.
struct TrigProbe {
  double amplitude = 0.0;
  int freq_index = 0;
  int harmonic = 1;
  double constant = 0.0;
};

struct EquidistReport {
  double birkhoff_avg = 0.0;
  double space_avg = 0.0;
  double gap = 0.0;
};

// Birkhoff averages of the probes along the orbit of the origin under
// repeated translation by xhat, compared against the exact torus mean.
std::vector<EquidistReport> equidistribution_test(
    const TorusSpace& space, Vec xhat, int n_steps,
    const std::vector<TrigProbe>& probes);

// Structured text (JSON) round-trip of an APSeriesModel together with its
// frequency family tag and truncation order k.
std::string ap_series_to_text(const APSeriesModel& model);
APSeriesModel ap_series_from_text(const std::string& text);

}  // namespace hjm

#endif  // HJMETRIC_ENV_HPP

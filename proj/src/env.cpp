#include "hjmetric/env.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

namespace hjm {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<double> sqrt_primes(int count) {
  std::vector<double> out;
  int n = 2;
  while (static_cast<int>(out.size()) < count) {
    if (is_prime(n)) out.push_back(std::sqrt(static_cast<double>(n)));
    ++n;
  }
  return out;
}

double mod1(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;  // guards against floor rounding at the boundary
  return r;
}

}  // namespace

FrequencyBasis generate_frequencies(int k, FrequencyFamily family,
                                    int space_dim,
                                    const std::vector<Vec>& user) {
  if (k < 1) throw std::invalid_argument("generate_frequencies: k must be >= 1");
  if (space_dim < 1 || space_dim > 2)
    throw std::invalid_argument("generate_frequencies: space_dim must be 1 or 2");

  FrequencyBasis basis;
  basis.space_dim = space_dim;
  if (family == FrequencyFamily::user_list) {
    if (static_cast<int>(user.size()) != k)
      throw std::invalid_argument("generate_frequencies: need exactly k user vectors");
    for (int i = 0; i < k; ++i) {
      if (!std::isfinite(user[i][0]) || !std::isfinite(user[i][1]) ||
          norm(user[i]) == 0.0)
        throw std::invalid_argument("generate_frequencies: vectors must be finite and nonzero");
      for (int j = 0; j < i; ++j)
        if (user[i] == user[j])
          throw std::invalid_argument("generate_frequencies: duplicate frequency vector");
    }
    basis.vectors = user;
    basis.family_tag = "user_list";
  } else {
    auto roots = sqrt_primes(k * space_dim);
    for (int j = 0; j < k; ++j) {
      Vec v = {roots[j * space_dim], 0.0};
      if (space_dim == 2) v[1] = roots[j * space_dim + 1];
      basis.vectors.push_back(v);
    }
    basis.family_tag = "sqrt_primes";
  }
  return basis;
}

EnvPoint origin_env(const TorusSpace& space) {
  EnvPoint w;
  w.coords.assign(space.k(), 0.0);
  return w;
}

EnvPoint translate(const EnvPoint& w, Vec x, const TorusSpace& space) {
  if (w.k() != space.k())
    throw std::invalid_argument("translate: dimension mismatch");
  EnvPoint out;
  out.coords.resize(w.coords.size());
  for (int j = 0; j < w.k(); ++j)
    out.coords[j] = mod1(w.coords[j] + dot(space.basis.vectors[j], x));
  return out;
}

double torus_distance(const EnvPoint& w, const EnvPoint& wp) {
  if (w.k() != wp.k())
    throw std::invalid_argument("torus_distance: dimension mismatch");
  double d = 0.0;
  double scale = 0.5;
  for (int j = 0; j < w.k(); ++j) {
    double t = std::fabs(mod1(w.coords[j]) - mod1(wp.coords[j]));
    d += scale * std::min(t, 1.0 - t);
    scale *= 0.5;
  }
  return d;
}

EnvPoint sample_env(const TorusSpace& space, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  EnvPoint w;
  w.coords.resize(space.k());
  for (auto& c : w.coords) c = uni(rng);
  return w;
}

double APSeriesModel::amplitude_bound() const {
  double s = 0.0;
  for (const auto& t : terms) s += std::fabs(t.amplitude);
  return s;
}

double evaluate_ap(const APSeriesModel& model, Vec x, const EnvPoint& w) {
  double v = model.constant;
  const auto& vectors = model.space->basis.vectors;
  for (const auto& t : model.terms) {
    if (t.freq_index < 0 || t.freq_index >= w.k() ||
        t.freq_index >= static_cast<int>(vectors.size()))
      throw std::out_of_range("evaluate_ap: frequency index out of range");
    double arg = dot(vectors[t.freq_index], x) + w.coords[t.freq_index] + t.phase;
    v += t.amplitude * std::cos(kTwoPi * arg);
  }
  return v;
}

std::vector<EquidistReport> equidistribution_test(
    const TorusSpace& space, Vec xhat, int n_steps,
    const std::vector<TrigProbe>& probes) {
  if (n_steps < 1)
    throw std::invalid_argument("equidistribution_test: n_steps must be >= 1");
  if (norm(xhat) == 0.0)
    throw std::invalid_argument("equidistribution_test: xhat must be nonzero");

  std::vector<double> sums(probes.size(), 0.0);
  EnvPoint w = origin_env(space);
  for (int m = 0; m < n_steps; ++m) {
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const auto& p = probes[i];
      if (p.freq_index < 0 || p.freq_index >= space.k())
        throw std::out_of_range("equidistribution_test: probe index out of range");
      sums[i] += p.constant +
                 p.amplitude * std::cos(kTwoPi * p.harmonic * w.coords[p.freq_index]);
    }
    w = translate(w, xhat, space);
  }

  std::vector<EquidistReport> reports(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) {
    reports[i].birkhoff_avg = sums[i] / n_steps;
    reports[i].space_avg = probes[i].constant;  // nonconstant characters integrate to 0
    reports[i].gap = std::fabs(reports[i].birkhoff_avg - reports[i].space_avg);
  }
  return reports;
}

std::string ap_series_to_text(const APSeriesModel& model) {
  nlohmann::json j;
  j["family"] = model.space->basis.family_tag;
  j["k"] = model.space->k();
  j["space_dim"] = model.space->space_dim();
  j["constant"] = model.constant;
  j["frequencies"] = nlohmann::json::array();
  for (const auto& v : model.space->basis.vectors)
    j["frequencies"].push_back({v[0], v[1]});
  j["terms"] = nlohmann::json::array();
  for (const auto& t : model.terms)
    j["terms"].push_back({{"amplitude", t.amplitude},
                          {"freq_index", t.freq_index},
                          {"phase", t.phase}});
  return j.dump(2);
}

APSeriesModel ap_series_from_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  const int k = j.at("k").get<int>();
  const int space_dim = j.at("space_dim").get<int>();
  const std::string family = j.at("family").get<std::string>();

  FrequencyBasis basis;
  if (family == "sqrt_primes") {
    basis = generate_frequencies(k, FrequencyFamily::sqrt_primes, space_dim);
  } else {
    std::vector<Vec> user;
    for (const auto& f : j.at("frequencies"))
      user.push_back({f.at(0).get<double>(), f.at(1).get<double>()});
    basis = generate_frequencies(k, FrequencyFamily::user_list, space_dim, user);
  }

  APSeriesModel model;
  model.space = std::make_shared<TorusSpace>(TorusSpace{std::move(basis)});
  model.constant = j.value("constant", 0.0);
  for (const auto& t : j.at("terms")) {
    APTerm term;
    term.amplitude = t.at("amplitude").get<double>();
    term.freq_index = t.at("freq_index").get<int>();
    term.phase = t.at("phase").get<double>();
    if (term.freq_index < 0 || term.freq_index >= k)
      throw std::invalid_argument("ap_series_from_text: frequency index out of range");
    model.terms.push_back(term);
  }
  return model;
}

}  // namespace hjm

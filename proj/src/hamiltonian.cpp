#include "hjmetric/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hjmetric/window.hpp"

namespace hjm {
namespace {

constexpr double kGolden = 0.6180339887498949;
constexpr double kPi = 3.141592653589793238462643383279;

// Minimize a unimodal function on [lo, hi] by golden-section search.
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double xtol, double* argmin = nullptr) {
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xtol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    }
  }
  double xm = 0.5 * (a + b);
  if (argmin) *argmin = xm;
  return f(xm);
}

std::vector<Vec> unit_directions(int dim, int count2d) {
  std::vector<Vec> dirs;
  if (dim == 1) {
    dirs = {vec1(1.0), vec1(-1.0)};
  } else {
    dirs.reserve(count2d);
    for (int m = 0; m < count2d; ++m) {
      double th = 2.0 * kPi * m / count2d;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
  }
  return dirs;
}

// Along a ray from an interior point p0, find t with H(p0 + t e) = a.
// H is convex so the ray map is monotone past the minimizer.
double ray_level_crossing(const HamiltonianModel& model, Vec x, const EnvPoint& w,
                          Vec p0, Vec e, double a, double t_hint) {
  double lo = 0.0;
  double hi = std::max(t_hint, 1e-6);
  int guard = 0;
  while (eval_H(model, x, p0 + hi * e, w) <= a) {
    hi *= 2.0;
    if (++guard > 200) break;
  }
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    if (eval_H(model, x, p0 + mid * e, w) <= a)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

HamiltonianModel HamiltonianModel::eikonal(APSeriesModel potential, int dim) {
  HamiltonianModel m;
  m.kind_ = HamiltonianKind::eikonal_quadratic;
  m.dim_ = dim;
  m.potential_ = std::move(potential);
  m.envelope_ = {1.0, m.potential_.min_bound(), 1.0, m.potential_.max_bound()};
  return m;
}

HamiltonianModel HamiltonianModel::generic(Evaluator h, CoercivityEnvelope env,
                                           int dim) {
  HamiltonianModel m;
  m.kind_ = HamiltonianKind::generic_convex;
  m.dim_ = dim;
  m.envelope_ = env;
  m.evaluator_ = std::move(h);
  return m;
}

HamiltonianModel HamiltonianModel::shifted(const HamiltonianModel& base, Vec shift) {
  // |p + P|^2 >= |p|^2/2 - |P|^2 and <= 2|p|^2 + 2|P|^2.
  CoercivityEnvelope env;
  double s2 = dot(shift, shift);
  env.ca = 0.5 * base.envelope_.ca;
  env.a_off = base.envelope_.a_off - base.envelope_.ca * s2;
  env.cb = 2.0 * base.envelope_.cb;
  env.b_off = base.envelope_.b_off + 2.0 * base.envelope_.cb * s2;
  HamiltonianModel copy = base;
  return generic(
      [copy, shift](Vec x, Vec p, const EnvPoint& w) {
        return eval_H(copy, x, p + shift, w);
      },
      env, base.dim_);
}

double HamiltonianModel::potential_at(Vec x, const EnvPoint& w) const {
  return evaluate_ap(potential_, x, w);
}

double eval_H(const HamiltonianModel& model, Vec x, Vec p, const EnvPoint& w) {
  if (model.kind_ == HamiltonianKind::eikonal_quadratic)
    return dot(p, p) + model.potential_at(x, w);
  return model.evaluator_(x, p, w);
}

std::pair<Vec, double> min_over_p(const HamiltonianModel& model, Vec x,
                                  const EnvPoint& w) {
  if (model.kind() == HamiltonianKind::eikonal_quadratic)
    return {Vec{0.0, 0.0}, model.potential_at(x, w)};

  // Coordinate descent with golden-section line searches.  The search box
  // comes from the envelope: alpha(|p*|) <= H(p*) <= H(0) <= beta(0).
  const auto& env = model.envelope();
  double box = env.radius_for_level(env.beta(0.0)) + 1.0;
  Vec p = {0.0, 0.0};
  double value = eval_H(model, x, p, w);
  for (int sweep = 0; sweep < 60; ++sweep) {
    double prev = value;
    for (int ax = 0; ax < model.dim(); ++ax) {
      Vec q = p;
      double t;
      value = golden_min(
          [&](double s) {
            Vec pp = q;
            pp[ax] = s;
            return eval_H(model, x, pp, w);
          },
          -box, box, 1e-12, &t);
      p[ax] = t;
    }
    if (prev - value < 1e-12 && sweep >= model.dim()) break;
  }
  return {p, value};
}

MomentumBall kappa_bound(const HamiltonianModel& model, double a,
                         const GridWindow& window, const EnvPoint& w) {
  const auto dirs = unit_directions(model.dim(), 32);
  double t_hint = model.envelope().radius_for_level(a) + 1.0;
  double radius = -1.0;
  for (int node = 0; node < window.node_count(); ++node) {
    Vec x = window.coords(node);
    auto [p0, m] = min_over_p(model, x, w);
    if (m > a) continue;
    for (const auto& e : dirs) {
      double t = ray_level_crossing(model, x, w, p0, e, a, t_hint);
      radius = std::max(radius, norm(p0 + t * e));
    }
  }
  if (radius < 0.0)
    throw EmptySublevel("kappa_bound: sublevel empty at every window node");
  return {a, radius};
}

double legendre(const HamiltonianModel& model, Vec x, Vec q, const EnvPoint& w) {
  if (model.kind() == HamiltonianKind::eikonal_quadratic)
    return 0.25 * dot(q, q) - model.potential_at(x, w);

  double qn = norm(q);
  if (qn == 0.0) return -min_over_p(model, x, w).second;

  // Maximize t|q| - H(x, t qhat, w); concave in t.  The envelope bounds the
  // maximizer: t|q| - ca t^2 - a_off must beat the value at t = 0.
  Vec qhat = (1.0 / qn) * q;
  const auto& env = model.envelope();
  double T = qn / (2.0 * env.ca) +
             std::sqrt(std::max(0.0, (env.beta(0.0) - env.a_off) / env.ca)) + 1.0;
  auto f = [&](double t) { return -(t * qn - eval_H(model, x, t * qhat, w)); };
  return -golden_min(f, -T, T, 1e-12);
}

double support_sigma(const HamiltonianModel& model, Vec x, Vec q,
                     const EnvPoint& w, double a) {
  if (model.analytic_sigma()) {
    double s = a - model.potential_at(x, w);
    if (s < -1e-12) throw EmptySublevel("support_sigma: level below potential");
    return std::sqrt(std::max(s, 0.0)) * norm(q);
  }

  auto [p0, m] = min_over_p(model, x, w);
  if (m > a + 1e-12) throw EmptySublevel("support_sigma: level below pointwise min");
  if (norm(q) == 0.0) return 0.0;
  if (m >= a) return dot(q, p0);  // degenerate sublevel, single point

  const auto dirs = unit_directions(model.dim(), kSigmaDirections2D);
  double t_hint = model.envelope().radius_for_level(a) + 1.0;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& e : dirs) {
    double t = ray_level_crossing(model, x, w, p0, e, a, t_hint);
    best = std::max(best, dot(q, p0 + t * e));
  }
  return best;
}

}  // namespace hjm

#ifndef HJMETRIC_HAMILTONIAN_HPP
#define HJMETRIC_HAMILTONIAN_HPP

#include <functional>
#include <utility>

#include "hjmetric/core.hpp"
#include "hjmetric/env.hpp"

namespace hjm {

enum class HamiltonianKind { eikonal_quadratic, generic_convex };

// Coercivity envelope: ca*r^2 + a_off <= H(x,p,w) <= cb*r^2 + b_off for
// r = |p|, uniformly in (x,w). Quadratic envelopes cover the model family
// shipped here (|p|^2 + V and its momentum shifts).
struct CoercivityEnvelope {
  double ca = 1.0;
  double a_off = 0.0;
  double cb = 1.0;
  double b_off = 0.0;

  double alpha(double r) const { return ca * r * r + a_off; }
  double beta(double r) const { return cb * r * r + b_off; }
  // Radius beyond which H must exceed level a.
  double radius_for_level(double a) const {
    double s = (a - a_off) / ca;
    return s > 0.0 ? std::sqrt(s) : 0.0;
  }
};

// A Hamiltonian H(x,p,w) convex and coercive in p, stationary in (x,w).
// The eikonal kind is H = |p|^2 + V(x,w) with V a trigonometric polynomial;
// the generic kind wraps a user evaluator and relies on its envelope.
class HamiltonianModel {
 public:
  using Evaluator = std::function<double(Vec x, Vec p, const EnvPoint& w)>;

  static HamiltonianModel eikonal(APSeriesModel potential, int dim);
  static HamiltonianModel generic(Evaluator h, CoercivityEnvelope envelope,
                                  int dim);
  // H(x, p + shift, w) of an existing model, as a generic-kind model.
  static HamiltonianModel shifted(const HamiltonianModel& base, Vec shift);

  HamiltonianKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const CoercivityEnvelope& envelope() const { return envelope_; }
  const APSeriesModel& potential() const { return potential_; }
  bool analytic_sigma() const { return kind_ == HamiltonianKind::eikonal_quadratic; }

  double potential_at(Vec x, const EnvPoint& w) const;

  friend double eval_H(const HamiltonianModel&, Vec, Vec, const EnvPoint&);

 private:
  HamiltonianModel() = default;
  HamiltonianKind kind_ = HamiltonianKind::eikonal_quadratic;
  int dim_ = 1;
  APSeriesModel potential_;
  CoercivityEnvelope envelope_;
  Evaluator evaluator_;
};

struct MomentumBall {
  double level = 0.0;   // a
  double radius = 0.0;  // kappa_a
};

struct GridWindow;  // metricgraph.hpp

double eval_H(const HamiltonianModel& model, Vec x, Vec p, const EnvPoint& w);

// kappa_a over the window grid: largest |p| with H(x,p,w) <= a at some grid
// point, by ray bisection from the pointwise minimizer.
MomentumBall kappa_bound(const HamiltonianModel& model, double a,
                         const GridWindow& window, const EnvPoint& w);

// Legendre transform L(x,q,w) = max_p { <p,q> - H(x,p,w) }.
double legendre(const HamiltonianModel& model, Vec x, Vec q, const EnvPoint& w);

// Pointwise minimizer of p -> H(x,p,w) and the minimum value.
std::pair<Vec, double> min_over_p(const HamiltonianModel& model, Vec x,
                                  const EnvPoint& w);

// Support function of the sublevel Z_a(x,w) = {p : H <= a} in direction q.
// Throws EmptySublevel when a is below the pointwise minimum.
double support_sigma(const HamiltonianModel& model, Vec x, Vec q,
                     const EnvPoint& w, double a);

// Number of boundary directions sampled by the generic support-function
// path (support error O(M^-2) in the angular resolution).
inline constexpr int kSigmaDirections2D = 64;

}  // namespace hjm

#endif  // HJMETRIC_HAMILTONIAN_HPP

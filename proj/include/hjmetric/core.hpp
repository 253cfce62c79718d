#ifndef HJMETRIC_CORE_HPP
#define HJMETRIC_CORE_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace hjm {

// Spatial points/vectors in dimension 1 or 2. The second component is kept
// at zero in 1D so most code is dimension-agnostic.
using Vec = std::array<double, 2>;

inline Vec vec1(double x) { return {x, 0.0}; }
inline Vec vec2(double x, double y) { return {x, y}; }

inline Vec operator+(Vec a, Vec b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec operator-(Vec a, Vec b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec operator*(double t, Vec a) { return {t * a[0], t * a[1]}; }
inline Vec operator-(Vec a) { return {-a[0], -a[1]}; }

inline double dot(Vec a, Vec b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(Vec a) { return std::sqrt(dot(a, a)); }

// Domain-level failures that callers are expected to catch and interpret.

// Raised when a sublevel set {p : H(x,p,w) <= a} is empty at the queried
// point, i.e. the level a is below the pointwise minimum of H.
class EmptySublevel : public std::runtime_error {
 public:
  explicit EmptySublevel(const std::string& what) : std::runtime_error(what) {}
};

class NegativeCycleError : public std::runtime_error {
 public:
  NegativeCycleError(const std::string& what, std::vector<int> cycle)
      : std::runtime_error(what), cycle_nodes(std::move(cycle)) {}
  std::vector<int> cycle_nodes;
};

class NoCycleError : public std::runtime_error {
 public:
  explicit NoCycleError(const std::string& what) : std::runtime_error(what) {}
};

class BracketError : public std::runtime_error {
 public:
  BracketError(const std::string& what, double lo, double hi)
      : std::runtime_error(what), bracket_lo(lo), bracket_hi(hi) {}
  double bracket_lo;
  double bracket_hi;
};

}  // namespace hjm

#endif  // HJMETRIC_CORE_HPP

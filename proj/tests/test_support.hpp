#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "absnorm/norm2.hpp"
#include "absnorm/space.hpp"

namespace absnorm::testing {

inline AbsoluteNorm l1() { return AbsoluteNorm::p(1.0); }
inline AbsoluteNorm l15() { return AbsoluteNorm::p(1.5); }
inline AbsoluteNorm l2() { return AbsoluteNorm::p(2.0); }
inline AbsoluteNorm l3() { return AbsoluteNorm::p(3.0); }
inline AbsoluteNorm linf() { return AbsoluteNorm::infinity(); }
inline AbsoluteNorm p1() {
  return AbsoluteNorm::polygonal({{1.0, 0.0}, {0.5, 0.75}, {0.0, 1.0}});
}

inline std::vector<AbsoluteNorm> zoo() {
  return {l1(), l15(), l2(), l3(), linf(), p1(), swap(p1())};
}

/// Random convex first-quadrant arc: vertices inscribed in the quarter
/// circle of a random l^p sphere with 1 < p < 8, so convexity holds by
/// construction.
inline std::vector<Point2> random_convex_arc(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double p = 1.1 + 6.9 * unit(rng);
  const int n = count(rng);
  std::vector<double> angles;
  for (int i = 0; i < n; ++i) angles.push_back((0.02 + 0.96 * unit(rng)) * 1.5707963267948966);
  std::sort(angles.begin(), angles.end());
  std::vector<Point2> vertices{{1.0, 0.0}};
  for (double theta : angles) {
    vertices.push_back({std::pow(std::cos(theta), 2.0 / p),
                        std::pow(std::sin(theta), 2.0 / p)});
  }
  vertices.push_back({0.0, 1.0});
  return vertices;
}

/// Random polyhedral norm on R^dim: 2..6 functionals in random directions
/// with lengths in [0.5, 1.5], plus the coordinate functionals scaled by a
/// random factor so the set always spans.
inline FiniteSpace random_polyhedral(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<int> count(2, 6);
  std::vector<Vector> functionals;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    Vector f(dim);
    double len = 0.0;
    for (double& v : f) {
      v = gauss(rng);
      len += v * v;
    }
    const double scale = (0.5 + unit(rng)) / std::sqrt(len);
    for (double& v : f) v *= scale;
    functionals.push_back(f);
  }
  for (int i = 0; i < dim; ++i) {
    Vector e(dim, 0.0);
    e[i] = 0.3 + 0.4 * unit(rng);
    functionals.push_back(e);
  }
  return FiniteSpace::polyhedral(functionals);
}

inline Vector unit_at(const FiniteSpace& space, double theta) {
  Vector u{std::cos(theta), std::sin(theta)};
  const double n = space.norm(u);
  return {u[0] / n, u[1] / n};
}

}  // namespace absnorm::testing

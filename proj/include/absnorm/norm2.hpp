#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "absnorm/report.hpp"

namespace absnorm {

inline constexpr double kDefaultBoundaryTol = 1e-9;

struct Point2 {
  double a = 0.0;
  double b = 0.0;
};

/// An absolute, normalised norm on R^2. Values are immutable and cheap to
/// copy; all representations are evaluated on |a|, |b|.
class AbsoluteNorm {
 public:
  enum class Kind { kP, kPolygonal, kSwapped, kDual };

  /// p in [1, inf]; pass std::numeric_limits<double>::infinity() or use
  /// infinity() for the max norm.
  static AbsoluteNorm p(double p);
  static AbsoluteNorm infinity();
  /// First-quadrant arc of the unit sphere from (1,0) to (0,1) in angular
  /// order. Rejects lists that do not describe a convex curve.
  static AbsoluteNorm polygonal(std::vector<Point2> vertices);
  /// Same structural checks as polygonal() but skips convexity, so that
  /// validate() can be exercised on broken inputs.
  static AbsoluteNorm polygonal_unchecked(std::vector<Point2> vertices);
  static AbsoluteNorm swapped(const AbsoluteNorm& inner);
  /// Numeric dual handle; see dual.hpp. Prefer absnorm::dual().
  static AbsoluteNorm dual_numeric(const AbsoluteNorm& inner, int resolution);

  Kind kind() const;
  double operator()(double a, double b) const;

  // kP
  double exponent() const;
  bool is_max_norm() const;
  // kPolygonal
  const std::vector<Point2>& vertices() const;
  bool convex() const;
  // kSwapped, kDual
  const AbsoluteNorm& inner() const;
  // kDual
  int resolution() const;

  /// Vertex list when the norm is a polygon (possibly swapped).
  std::optional<std::vector<Point2>> exact_polygon() const;

  struct Impl;

 private:
  explicit AbsoluteNorm(std::shared_ptr<const Impl> impl)
      : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

inline double evaluate(const AbsoluteNorm& norm, double a, double b) {
  return norm(a, b);
}

/// Upper boundary curve: f(t) with F(t, f(t)) = 1 for |t| < 1, and
/// sup{b >= 0 : F(1, b) <= 1} at |t| = 1. Bisection until the bracket is at
/// most tol wide.
double boundary(const AbsoluteNorm& norm, double t,
                double tol = kDefaultBoundaryTol);

/// Same as boundary() but returns the bracket [lo, hi] with F(t,lo) <= 1.
Point2 boundary_bracket(const AbsoluteNorm& norm, double t, double tol);

/// F~(a, b) = F(b, a).
AbsoluteNorm swap(const AbsoluteNorm& norm);

/// Point of the unit sphere on the ray of angle theta.
Point2 sphere_point(const AbsoluteNorm& norm, double theta);

/// Grid check of normalisation, max <= F <= sum, monotonicity and midpoint
/// convexity. Never throws on a violation; the report carries it.
VerificationReport validate(const AbsoluteNorm& norm, int resolution,
                            double tol = 1e-9);

/// Supporting functional alpha with alpha.p = alpha.q = 1.
Point2 edge_functional(Point2 p, Point2 q);

}  // namespace absnorm

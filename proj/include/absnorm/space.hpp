#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "absnorm/norm2.hpp"

namespace absnorm {

using Vector = std::vector<double>;

/// A norm on R^n: p-norm, polyhedral (max |f_i . x|), an F-sum of two
/// spaces, or the pushforward of a space through an invertible map.
class FiniteSpace {
 public:
  enum class Kind { kP, kPolyhedral, kSum, kMapped };

  static FiniteSpace p(double p, int dim);
  /// functionals must span R^dim, otherwise the gauge is not a norm.
  static FiniteSpace polyhedral(std::vector<Vector> functionals);
  /// ||(x,y)|| = F(||x||_left, ||y||_right).
  static FiniteSpace sum(const FiniteSpace& left, const FiniteSpace& right,
                         const AbsoluteNorm& F);
  /// ||y|| = ||inverse * y||_inner; inverse is row-major dim x dim.
  static FiniteSpace mapped(const FiniteSpace& inner, Vector inverse);

  Kind kind() const;
  int dim() const;
  double norm(std::span<const double> x) const;
  double operator()(std::span<const double> x) const { return norm(x); }

  // kP
  double exponent() const;
  // kPolyhedral
  const std::vector<Vector>& functionals() const;
  // kSum
  const FiniteSpace& left() const;
  const FiniteSpace& right() const;
  const AbsoluteNorm& outer() const;
  // kMapped
  const FiniteSpace& inner() const;
  const Vector& inverse() const;

  struct Impl;

 private:
  explicit FiniteSpace(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Checked norm: throws kDimensionMismatch when x has the wrong length.
double norm(const FiniteSpace& space, std::span<const double> x);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return lo <= v && v <= hi; }
  double width() const { return hi - lo; }
};

/// Knobs shared by the certified sphere searches. resolution is the number
/// of leaf cells of the sphere cover at full depth; gap stops a search once
/// hi - lo <= gap; budget caps norm evaluations (the bracket stays valid,
/// only wider).
struct SearchOptions {
  long resolution = 0;  // 0: default for the dimension
  double gap = 0.0;
  long budget = 200'000'000;
};

long default_resolution(int dim);

struct PointBracket {
  Interval value;
  Vector argbest;
  long evaluations = 0;
  bool certified = true;
  bool budget_exhausted = false;
};

struct ModuliReport {
  std::optional<Interval> s;
  std::optional<Interval> lasq_defect;
  long resolution = 0;
  double lipschitz_margin = 0.0;
  double gap = 0.0;
  bool certified = true;
  bool budget_exhausted = false;
  long evaluations = 0;
  Vector witness;              // argmin x for s, argmax x for the defect
  Interval witness_inner{};    // inner bracket at the witness
};

/// m(x) = sup_{y in S_X} min(||x+y||, ||x-y||), bracketed.
PointBracket m_of_x(const FiniteSpace& space, std::span<const double> x,
                    const SearchOptions& options = {});

/// s(X) = inf_x m(x). dim 1 returns exactly 0.
ModuliReport s_modulus(const FiniteSpace& space, const SearchOptions& options = {});

/// lambda(X) = sup_x inf_y max(| ||x+y|| - 1 |, | ||x-y|| - 1 |).
ModuliReport lasq_defect(const FiniteSpace& space, const SearchOptions& options = {});

/// inf_y max(| ||x+y|| - 1 |, | ||x-y|| - 1 |) at a single x.
PointBracket lasq_defect_at(const FiniteSpace& space, std::span<const double> x,
                            const SearchOptions& options = {});

/// sup_{y in S_X} min_i ||x_i + y||.
PointBracket oh_radius(const FiniteSpace& space, const std::vector<Vector>& points,
                       const SearchOptions& options = {});

struct SliceQuery {
  Vector functional;
  double eps = 0.1;
};

/// diam S(x*, eps), S = {z in B_X : x*(z) > 1 - eps}.
PointBracket slice_diameter(const FiniteSpace& space, const SliceQuery& query,
                            const SearchOptions& options = {});

/// A unit y with min(||x+y||, ||x-y||) >= target - tol, if the search finds one.
std::optional<Vector> exact_witness(const FiniteSpace& space,
                                    std::span<const double> x, double target,
                                    const SearchOptions& options = {},
                                    double tol = 1e-9);

}  // namespace absnorm

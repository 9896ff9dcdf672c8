#pragma once

#include <optional>

#include "absnorm/report.hpp"
#include "absnorm/space.hpp"

namespace absnorm {

/// Invertible dim x dim matrix, row-major.
class LinearMap {
 public:
  /// Throws kDimensionMismatch for a wrong entry count and kSingularMatrix
  /// when the matrix is not invertible.
  LinearMap(int dim, Vector entries);
  static LinearMap identity(int dim);

  int dim() const { return dim_; }
  const Vector& entries() const { return entries_; }
  double operator()(int i, int j) const { return entries_[i * dim_ + j]; }
  Vector apply(std::span<const double> x) const;
  LinearMap inverse() const;
  LinearMap compose(const LinearMap& inner) const;  // this * inner
  /// 2-norm condition number sigma_max / sigma_min.
  double condition() const;

 private:
  int dim_;
  Vector entries_;
};

/// Y with ||y||_Y = ||T^-1 y||_X, so that T : X -> Y is an isometry.
FiniteSpace pushforward(const FiniteSpace& X, const LinearMap& T);

/// sup over the unit sphere of `from` of ||T x||_to. Exact for l^1 and l^inf
/// domains (the sup sits at a vertex of the ball), Lipschitz-certified
/// otherwise.
PointBracket operator_norm(const LinearMap& T, const FiniteSpace& from,
                           const FiniteSpace& to, const SearchOptions& options = {});

struct BmResult {
  double value = 0.0;  // certified ||T|| ||T^-1|| of the best map, an upper bound on dist
  LinearMap map = LinearMap::identity(1);
  Interval forward;
  Interval backward;
  int starts = 0;
};

/// Multi-start coordinate descent over matrix entries; dim <= 3.
BmResult bm_upper(const FiniteSpace& X, const FiniteSpace& Y, int restarts = 64,
                  long resolution = 0);

/// s(X) against s of the pushforward (an exact isometry), and, with a target
/// space Z, the near-isometry bound |s(X) - s(Z)| <= c delta where
/// 1 + delta bounds ||T||_{X->Z} ||T^-1||_{Z->X}.
VerificationReport check_s_isometry_invariance(const FiniteSpace& X, const LinearMap& T,
                                               const SearchOptions& options = {},
                                               const std::optional<FiniteSpace>& target = {});

}  // namespace absnorm

#pragma once

#include <optional>
#include <string>

#include "absnorm/norm2.hpp"

namespace absnorm {

/// Threshold used for "F(.) = 2" style equalities.
inline constexpr double kEqualityTau = 1e-9;

enum class Extreme { kInfinityNorm, kOneNorm, kNeither };

const char* to_string(Extreme extreme);

/// F(1,1) = 1 exactly for the max norm and 2 exactly for the sum norm. The
/// classification is cross-checked against a (resolution+1)^2 grid; a
/// mismatch throws kInconsistency since it means the input is not a norm.
Extreme classify_extremes(const AbsoluteNorm& norm, int resolution = 256,
                          double tol = 1e-9);

/// r_F = inf{a : F(a,b) = 1 and F(a+1,b) = 2 for some b >= 0}.
/// Polygons take the exact path, everything else the bisection path.
double r_of(const AbsoluteNorm& norm, double tol = 1e-9);

/// Left endpoint of {a : F(a+1, f(a)) >= 2 - tol/10} by bisection.
double r_of_bisection(const AbsoluteNorm& norm, double tol = 1e-9);

/// First coordinate of the far end of the sphere segment through (1,0).
std::optional<double> r_of_exact(const AbsoluteNorm& norm);

/// x is an SC-point if F(x + y) < 2 - tau for every other unit y. The scan
/// uses 4*resolution points of the whole sphere and skips the samples within
/// two mesh steps of x.
bool is_sc_point(const AbsoluteNorm& norm, Point2 point, int resolution = 1024,
                 double tau = kEqualityTau);

/// (2 - tau) - max F(x + y) over the same scan; positive iff is_sc_point.
double sc_margin(const AbsoluteNorm& norm, Point2 point, int resolution = 1024,
                 double tau = kEqualityTau);

/// Certified delta for: F(a,b) = 1, F(a,1) <= 1 + delta  =>  b >= 1 - eps.
/// Throws kInfinityNormExcluded for the max norm and kResolutionExhausted if
/// the grid would have to exceed max_resolution.
double lasq2_modulus(const AbsoluteNorm& norm, double eps,
                     int resolution = 1024, int max_resolution = 1 << 22);

/// Certified delta for: F(a,b) = 1, 0 <= c <= 1+a, F(c,b) >= 2 - delta
/// =>  c >= 1 + r_F - eps.
double loh3_modulus(const AbsoluteNorm& norm, double eps,
                    int resolution = 1024, int max_resolution = 1 << 22);

struct OctahedralityScan {
  std::optional<Point2> witness;
  Point2 best;
  double best_residual = 0.0;
  int resolution = 0;
};

/// Searches the first-quadrant arc for c, d >= 0 with F(c,d) = 1 and
/// F(c+1,d) = F(c,d+1) = 2. No witness is a non-certificate.
OctahedralityScan positive_octahedrality(const AbsoluteNorm& norm,
                                         int resolution = 4096,
                                         double tol = 1e-9);

/// delta such that no unit (u,v) of any F-sum keeps all four of
/// F(|x+-u|,|v|), F(|u|,|y+-v|) at or below 1 + delta.
double asq_obstruction(const AbsoluteNorm& norm, int resolution = 1024);

/// eps used by asq_obstruction: (1 - 1/F(1,1)) / 2.
double asq_epsilon(const AbsoluteNorm& norm);

struct NormProfile {
  double F11 = 0.0;
  Extreme extreme = Extreme::kNeither;
  double rF = 0.0;
  double rF_swapped = 0.0;
  bool sc_at_10 = false;
  bool sc_at_01 = false;
  double f_at_1 = 0.0;
  OctahedralityScan po;
  std::optional<double> asq_obstruction;
  std::string asq_note;
  double tolerance = 0.0;
  int resolution = 0;
};

NormProfile profile(const AbsoluteNorm& norm, double tol = 1e-9,
                    int resolution = 1024);

}  // namespace absnorm

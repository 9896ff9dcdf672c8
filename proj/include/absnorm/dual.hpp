#pragma once

#include "absnorm/norm2.hpp"
#include "absnorm/report.hpp"

namespace absnorm {

inline constexpr int kDefaultDualResolution = 4096;

/// F*(c,d) = sup{|ac| + |bd| : F(a,b) <= 1}.
///
/// Polygons (and swapped polygons) get the exact polar polygon. Everything
/// else becomes a numeric handle: a table of sphere points of F brackets the
/// maximiser of c*a + d*b along the arc, and golden-section search over the
/// angle refines it.
AbsoluteNorm dual(const AbsoluteNorm& norm,
                  int resolution = kDefaultDualResolution);

/// Vertices of the polar of a first-quadrant polygon arc.
std::vector<Point2> dual_polygon(const std::vector<Point2>& vertices);

/// max |F**(p) - F(p)| over unit vectors of F on a first-quadrant grid.
VerificationReport bidual_check(const AbsoluteNorm& norm, int resolution = 256,
                                double tol = 1e-6);

/// True when the left/right difference quotients of F across the sphere at
/// p agree (their gap shrinks with the step instead of staying put).
bool smooth_at(const AbsoluteNorm& norm, Point2 p);

/// Smooth F => sampled sphere points of F* are SC-points; strictly convex F
/// => r_F = 1. Vacuous when neither hypothesis holds on the samples.
VerificationReport duality_chain_check(const AbsoluteNorm& norm,
                                       int resolution = 64);

}  // namespace absnorm

#pragma once

#include <vector>

#include "absnorm/norm2.hpp"

namespace absnorm::detail {

// Sphere points of the primal norm at angles (pi/2) k / resolution.
std::vector<Point2> build_dual_table(const AbsoluteNorm& inner, int resolution);

// max of c*a + d*b over the first-quadrant sphere arc, c, d >= 0.
double dual_value(const AbsoluteNorm& inner, const std::vector<Point2>& table,
                  double c, double d);

}  // namespace absnorm::detail

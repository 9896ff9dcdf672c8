#include "absnorm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "absnorm/errors.hpp"

namespace absnorm {

namespace {

constexpr double kFineBoundaryTol = 1e-13;

void require_not_max_norm(const AbsoluteNorm& norm) {
  if (std::abs(norm(1.0, 1.0) - 1.0) <= 1e-9) {
    throw Error(ErrorCode::kInfinityNormExcluded,
                "operation requires F different from the max norm");
  }
}

void require_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "eps must lie in (0,1)");
  }
}

}  // namespace

const char* to_string(Extreme extreme) {
  switch (extreme) {
    case Extreme::kInfinityNorm: return "InfinityNorm";
    case Extreme::kOneNorm: return "OneNorm";
    case Extreme::kNeither: return "Neither";
  }
  return "Unknown";
}

Extreme classify_extremes(const AbsoluteNorm& norm, int resolution,
                          double tol) {
  if (resolution < 2) {
    throw Error(ErrorCode::kInvalidArgument, "resolution must be >= 2");
  }
  const double f11 = norm(1.0, 1.0);
  const bool is_inf = std::abs(f11 - 1.0) <= tol;
  const bool is_one = std::abs(f11 - 2.0) <= tol;

  bool agrees_inf = true;
  bool agrees_one = true;
  for (int i = 0; i <= resolution; ++i) {
    for (int j = 0; j <= resolution; ++j) {
      const double a = static_cast<double>(i) / resolution;
      const double b = static_cast<double>(j) / resolution;
      const double value = norm(a, b);
      const double slack = tol * (a + b);
      if (std::abs(value - std::max(a, b)) > slack) agrees_inf = false;
      if (std::abs(value - (a + b)) > slack) agrees_one = false;
    }
  }
  if (is_inf != agrees_inf || is_one != agrees_one) {
    throw Error(ErrorCode::kInconsistency,
                "F(1,1) classification disagrees with the grid comparison");
  }
  if (is_inf) return Extreme::kInfinityNorm;
  if (is_one) return Extreme::kOneNorm;
  return Extreme::kNeither;
}

std::optional<double> r_of_exact(const AbsoluteNorm& norm) {
  const auto vertices = norm.exact_polygon();
  if (!vertices) return std::nullopt;
  // Convex polygons have no collinear interior vertices, so the segment
  // through (1,0) ends at the next vertex.
  return (*vertices)[1].a;
}

double r_of_bisection(const AbsoluteNorm& norm, double tol) {
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tolerance must be > 0");
  }
  const double tau = tol / 10.0;
  auto admissible = [&](double a) {
    const double b = boundary(norm, a, kFineBoundaryTol);
    return norm(a + 1.0, b) >= 2.0 - tau;
  };
  if (admissible(0.0)) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (admissible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double r_of(const AbsoluteNorm& norm, double tol) {
  if (auto exact = r_of_exact(norm)) return *exact;
  return r_of_bisection(norm, tol);
}

double sc_margin(const AbsoluteNorm& norm, Point2 point, int resolution,
                 double tau) {
  if (resolution < 2) {
    throw Error(ErrorCode::kInvalidArgument, "resolution must be >= 2");
  }
  if (std::abs(norm(point.a, point.b) - 1.0) > 1e-6) {
    throw Error(ErrorCode::kInvalidArgument, "SC test point is not on the unit sphere");
  }
  const int m = 4 * resolution;
  std::vector<Point2> sphere(m);
  for (int k = 0; k < m; ++k) {
    sphere[k] = sphere_point(norm, 2.0 * std::numbers::pi * k / m);
  }
  double mesh = 0.0;
  for (int k = 0; k < m; ++k) {
    const Point2& p = sphere[k];
    const Point2& q = sphere[(k + 1) % m];
    mesh = std::max(mesh, norm(q.a - p.a, q.b - p.b));
  }
  const double exclusion = 2.0 * mesh;
  double worst = 0.0;
  for (const Point2& y : sphere) {
    if (norm(y.a - point.a, y.b - point.b) <= exclusion) continue;
    worst = std::max(worst, norm(point.a + y.a, point.b + y.b));
  }
  return 2.0 - tau - worst;
}

bool is_sc_point(const AbsoluteNorm& norm, Point2 point, int resolution,
                 double tau) {
  return sc_margin(norm, point, resolution, tau) > 0.0;
}

double lasq2_modulus(const AbsoluteNorm& norm, double eps, int resolution,
                     int max_resolution) {
  require_eps(eps);
  require_not_max_norm(norm);
  if (resolution < 2) {
    throw Error(ErrorCode::kInvalidArgument, "resolution must be >= 2");
  }
  // g(a) = F(a,1) is non-decreasing and 1-Lipschitz and f is non-increasing,
  // so with step h the true infimum over {f(a) < 1-eps} is at least
  // min_grid g - 1 - h. Accept delta = (min_grid g - 1)/2 once h <= delta/2.
  for (long n = resolution; n <= max_resolution; n *= 2) {
    double min_excess = std::numeric_limits<double>::infinity();
    for (long k = n; k >= 0; --k) {
      const double a = static_cast<double>(k) / n;
      if (k != n && boundary(norm, a, kFineBoundaryTol) >= 1.0 - eps) break;
      min_excess = std::min(min_excess, norm(a, 1.0) - 1.0);
    }
    const double delta = 0.5 * min_excess;
    const double h = 1.0 / static_cast<double>(n);
    if (delta > 0.0 && h <= 0.5 * delta) return delta;
  }
  throw Error(ErrorCode::kResolutionExhausted,
              "lasq2 modulus needs a grid finer than the configured cap");
}

double loh3_modulus(const AbsoluteNorm& norm, double eps, int resolution,
                    int max_resolution) {
  require_eps(eps);
  if (resolution < 2) {
    throw Error(ErrorCode::kInvalidArgument, "resolution must be >= 2");
  }
  const double r = r_of(norm);
  const double c_max = 1.0 + std::min(1.0, r + 1e-9) - eps;
  auto c_star = [c_max](double a) { return std::min(1.0 + a, c_max); };
  // On [a_k, a_{k+1}] monotonicity gives F(c*(a), f(a)) <= F(c*(a_{k+1}), f(a_k)).
  for (long n = resolution; n <= max_resolution; n *= 2) {
    std::vector<double> f_hi(static_cast<std::size_t>(n + 1));
    for (long k = 0; k <= n; ++k) {
      f_hi[k] = boundary_bracket(norm, static_cast<double>(k) / n, kFineBoundaryTol).b;
    }
    double bound = norm(c_star(1.0), f_hi[n]);
    for (long k = 0; k < n; ++k) {
      const double a_next = static_cast<double>(k + 1) / n;
      bound = std::max(bound, norm(c_star(a_next), f_hi[k]));
    }
    const double delta = 2.0 - bound;
    if (delta > 0.0) return delta;
  }
  throw Error(ErrorCode::kResolutionExhausted,
              "loh3 modulus needs a grid finer than the configured cap");
}

OctahedralityScan positive_octahedrality(const AbsoluteNorm& norm,
                                         int resolution, double tol) {
  if (resolution < 2) {
    throw Error(ErrorCode::kInvalidArgument, "resolution must be >= 2");
  }
  OctahedralityScan scan;
  scan.resolution = resolution;
  scan.best_residual = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= resolution; ++k) {
    const double theta = 0.5 * std::numbers::pi * k / resolution;
    const Point2 p = sphere_point(norm, theta);
    const double residual = std::max({std::abs(norm(p.a, p.b) - 1.0),
                                      std::abs(norm(p.a + 1.0, p.b) - 2.0),
                                      std::abs(norm(p.a, p.b + 1.0) - 2.0)});
    if (residual < scan.best_residual) {
      scan.best_residual = residual;
      scan.best = p;
    }
  }
  if (scan.best_residual <= tol) scan.witness = scan.best;
  return scan;
}

double asq_epsilon(const AbsoluteNorm& norm) {
  return 0.5 * (1.0 - 1.0 / norm(1.0, 1.0));
}

double asq_obstruction(const AbsoluteNorm& norm, int resolution) {
  require_not_max_norm(norm);
  const double eps = asq_epsilon(norm);
  return std::min(lasq2_modulus(norm, eps, resolution),
                  lasq2_modulus(swap(norm), eps, resolution));
}

NormProfile profile(const AbsoluteNorm& norm, double tol, int resolution) {
  NormProfile out;
  out.tolerance = tol;
  out.resolution = resolution;
  out.F11 = norm(1.0, 1.0);
  out.extreme = classify_extremes(norm, std::min(resolution, 256), tol);
  out.rF = r_of(norm, tol);
  out.rF_swapped = r_of(swap(norm), tol);
  out.sc_at_10 = is_sc_point(norm, {1.0, 0.0}, resolution);
  out.sc_at_01 = is_sc_point(norm, {0.0, 1.0}, resolution);
  out.f_at_1 = boundary(norm, 1.0, tol);
  out.po = positive_octahedrality(norm, 4 * resolution, tol);
  if (out.extreme == Extreme::kInfinityNorm) {
    out.asq_note = "excluded: F is the max norm";
  } else {
    try {
      out.asq_obstruction = asq_obstruction(norm, resolution);
    } catch (const Error& e) {
      out.asq_note = std::string(to_string(e.code())) + ": " + e.what();
    }
  }
  return out;
}

}  // namespace absnorm

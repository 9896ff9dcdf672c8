#include "absnorm/dual.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "absnorm/errors.hpp"
#include "absnorm/geometry.hpp"
#include "detail.hpp"

namespace absnorm {

namespace detail {

namespace {
constexpr double kGoldenWidth = 1e-11;
}  // namespace

std::vector<Point2> build_dual_table(const AbsoluteNorm& inner, int resolution) {
  std::vector<Point2> table(static_cast<std::size_t>(resolution) + 1);
  for (int k = 0; k <= resolution; ++k) {
    table[k] = sphere_point(inner, 0.5 * std::numbers::pi * k / resolution);
  }
  table.front() = {1.0, 0.0};
  table.back() = {0.0, 1.0};
  return table;
}

double dual_value(const AbsoluteNorm& inner, const std::vector<Point2>& table,
                  double c, double d) {
  if (d == 0.0) return c;
  if (c == 0.0) return d;
  // Along the sphere arc a linear functional is unimodal in the angle, so the
  // best table node brackets the maximiser between its neighbours.
  const int n = static_cast<int>(table.size()) - 1;
  int best_k = 0;
  double best = -1.0;
  for (int k = 0; k <= n; ++k) {
    const double value = c * table[k].a + d * table[k].b;
    if (value > best) {
      best = value;
      best_k = k;
    }
  }
  const double step = 0.5 * std::numbers::pi / n;
  double lo = step * std::max(best_k - 1, 0);
  double hi = step * std::min(best_k + 1, n);
  auto objective = [&](double theta) {
    const Point2 p = sphere_point(inner, theta);
    return c * p.a + d * p.b;
  };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > kGoldenWidth) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    }
  }
  return std::max({best, f1, f2});
}

}  // namespace detail

std::vector<Point2> dual_polygon(const std::vector<Point2>& vertices) {
  constexpr double kSame = 1e-12;
  auto same = [](Point2 p, Point2 q) {
    return std::abs(p.a - q.a) <= kSame && std::abs(p.b - q.b) <= kSame;
  };
  std::vector<Point2> out{{1.0, 0.0}};
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    const Point2 alpha = edge_functional(vertices[i], vertices[i + 1]);
    if (!same(alpha, out.back())) out.push_back(alpha);
  }
  if (same(out.back(), {0.0, 1.0})) {
    out.back() = {0.0, 1.0};
  } else {
    out.push_back({0.0, 1.0});
  }
  return out;
}

AbsoluteNorm dual(const AbsoluteNorm& norm, int resolution) {
  if (resolution < 8) {
    throw Error(ErrorCode::kInvalidArgument, "dual resolution must be >= 8");
  }
  if (auto vertices = norm.exact_polygon()) {
    return AbsoluteNorm::polygonal(dual_polygon(*vertices));
  }
  if (norm.kind() == AbsoluteNorm::Kind::kSwapped) {
    return swap(dual(norm.inner(), resolution));
  }
  return AbsoluteNorm::dual_numeric(norm, resolution);
}

VerificationReport bidual_check(const AbsoluteNorm& norm, int resolution,
                                double tol) {
  VerificationReport report;
  report.claim_id = "bidual";
  report.parameters = {{"resolution", resolution}, {"tol", tol}};
  const AbsoluteNorm bidual = dual(dual(norm, resolution), resolution);
  constexpr int kAngles = 32;
  MarginTracker tracker;
  double max_dev = 0.0;
  for (int k = 0; k <= kAngles; ++k) {
    const Point2 p = sphere_point(norm, 0.5 * std::numbers::pi * k / kAngles);
    const double value = bidual(p.a, p.b);
    const double dev = std::abs(value - 1.0);
    max_dev = std::max(max_dev, dev);
    tracker.count();
    tracker.observe(tol - dev, [&] {
      return nlohmann::json{{"point", {p.a, p.b}}, {"F", 1.0}, {"F_bidual", value}};
    });
  }
  tracker.finish(report);
  report.parameters["max_deviation"] = max_dev;
  return report;
}

bool smooth_at(const AbsoluteNorm& norm, Point2 p) {
  const Point2 w{-p.b, p.a};
  const double center = norm(p.a, p.b);
  auto jump = [&](double s) {
    return (norm(p.a + s * w.a, p.b + s * w.b) +
            norm(p.a - s * w.a, p.b - s * w.b) - 2.0 * center) / s;
  };
  const double coarse = jump(1e-5);
  const double fine = jump(1e-7);
  return fine <= 1e-6 || fine <= 0.5 * coarse;
}

VerificationReport duality_chain_check(const AbsoluteNorm& norm,
                                       int resolution) {
  constexpr int kScResolution = 256;
  constexpr int kDualSamples = 16;
  VerificationReport report;
  report.claim_id = "duality-chain";
  report.parameters = {{"resolution", resolution},
                       {"sc_resolution", kScResolution}};

  std::vector<Point2> samples;
  for (int k = 0; k <= resolution; ++k) {
    samples.push_back(sphere_point(norm, 0.5 * std::numbers::pi * k / resolution));
  }
  const bool smooth = std::all_of(samples.begin(), samples.end(),
                                  [&](Point2 p) { return smooth_at(norm, p); });
  const bool strictly_convex =
      std::all_of(samples.begin(), samples.end(), [&](Point2 p) {
        return is_sc_point(norm, p, kScResolution);
      });

  MarginTracker tracker;
  if (smooth) {
    report.notes.push_back("F smooth on samples: checking dual SC-points");
    const AbsoluteNorm star = dual(norm, 1024);
    for (int k = 0; k <= kDualSamples; ++k) {
      const Point2 q = sphere_point(star, 0.5 * std::numbers::pi * k / kDualSamples);
      const double margin = sc_margin(star, q, kScResolution);
      tracker.count();
      tracker.observe(margin, [&] {
        return nlohmann::json{{"check", "dual-sc-point"}, {"point", {q.a, q.b}},
                              {"margin", margin}};
      });
    }
  } else {
    report.notes.push_back("hypothesis not met: F not smooth on samples");
  }
  if (strictly_convex) {
    report.notes.push_back("F strictly convex on samples: checking r_F = 1");
    const double r = r_of(norm);
    tracker.count();
    tracker.observe(1e-6 - std::abs(r - 1.0), [&] {
      return nlohmann::json{{"check", "r_F"}, {"r_F", r}};
    });
  } else {
    report.notes.push_back("hypothesis not met: F not strictly convex on samples");
  }
  tracker.finish(report);
  return report;
}

}  // namespace absnorm

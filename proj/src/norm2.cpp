#include "absnorm/norm2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <variant>

#include "absnorm/errors.hpp"
#include "detail.hpp"

namespace absnorm {

namespace {

struct PRep {
  double p;
  bool max_norm;
};

struct PolygonRep {
  std::vector<Point2> vertices;
  std::vector<Point2> functionals;  // one per edge
  bool convex;
};

struct SwappedRep {
  AbsoluteNorm inner;
};

struct DualRep {
  AbsoluteNorm inner;
  int resolution;
  std::vector<Point2> table;
};

double cross(Point2 u, Point2 v) { return u.a * v.b - u.b * v.a; }

double eval_p(const PRep& rep, double a, double b) {
  if (rep.max_norm) return std::max(a, b);
  if (rep.p == 1.0) return a + b;
  const double m = std::max(a, b);
  if (m == 0.0) return 0.0;
  if (rep.p == 2.0) return std::hypot(a, b);
  const double x = a / m;
  const double y = b / m;
  return m * std::pow(std::pow(x, rep.p) + std::pow(y, rep.p), 1.0 / rep.p);
}

double eval_polygon(const PolygonRep& rep, double a, double b) {
  if (a == 0.0 && b == 0.0) return 0.0;
  const Point2 p{a, b};
  const auto& v = rep.vertices;
  // Sector search: cross(v[lo], p) >= 0 and cross(v[hi], p) <= 0.
  std::size_t lo = 0;
  std::size_t hi = v.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (cross(v[mid], p) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const Point2 alpha = rep.functionals[lo];
  return alpha.a * a + alpha.b * b;
}

PolygonRep make_polygon(std::vector<Point2> vertices, bool require_convex) {
  if (vertices.size() < 2) {
    throw Error(ErrorCode::kInvalidNorm, "polygon needs at least 2 vertices");
  }
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const auto& p = vertices[i];
    if (!std::isfinite(p.a) || !std::isfinite(p.b) || p.a < 0.0 || p.b < 0.0) {
      std::ostringstream msg;
      msg << "vertices[" << i << "] must be finite and in the closed first quadrant";
      throw Error(ErrorCode::kInvalidNorm, msg.str());
    }
  }
  constexpr double kSnap = 1e-12;
  auto& first = vertices.front();
  auto& last = vertices.back();
  if (std::abs(first.a - 1.0) > kSnap || first.b > kSnap) {
    throw Error(ErrorCode::kInvalidNorm, "vertices[0] must be (1,0)");
  }
  if (last.a > kSnap || std::abs(last.b - 1.0) > kSnap) {
    throw Error(ErrorCode::kInvalidNorm, "last vertex must be (0,1)");
  }
  first = {1.0, 0.0};
  last = {0.0, 1.0};
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    if (cross(vertices[i], vertices[i + 1]) <= 0.0) {
      std::ostringstream msg;
      msg << "vertices[" << i + 1 << "] is not in increasing angular order";
      throw Error(ErrorCode::kInvalidNorm, msg.str());
    }
  }

  PolygonRep rep;
  rep.vertices = std::move(vertices);
  const auto& v = rep.vertices;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    rep.functionals.push_back(edge_functional(v[i], v[i + 1]));
  }

  // Interior vertices strictly outside the chord of their neighbours; at the
  // axes the mirrored neighbour must not make the curve reflex.
  bool convex = v[1].a <= 1.0 + kSnap && v[v.size() - 2].b <= 1.0 + kSnap;
  for (std::size_t i = 1; convex && i + 1 < v.size(); ++i) {
    const Point2 chord = edge_functional(v[i - 1], v[i + 1]);
    if (chord.a * v[i].a + chord.b * v[i].b <= 1.0 + kSnap) convex = false;
  }
  if (require_convex && !convex) {
    throw Error(ErrorCode::kInvalidNorm,
                "vertices do not describe a convex curve");
  }
  rep.convex = convex;
  return rep;
}

}  // namespace

struct AbsoluteNorm::Impl {
  std::variant<PRep, PolygonRep, SwappedRep, DualRep> rep;
};

Point2 edge_functional(Point2 p, Point2 q) {
  const double det = p.a * q.b - p.b * q.a;
  if (det == 0.0) {
    throw Error(ErrorCode::kInvalidNorm, "degenerate polygon edge");
  }
  return {(q.b - p.b) / det, (p.a - q.a) / det};
}

AbsoluteNorm AbsoluteNorm::p(double p) {
  if (std::isnan(p) || p < 1.0) {
    throw Error(ErrorCode::kInvalidNorm, "p must satisfy 1 <= p <= inf");
  }
  const bool max_norm = std::isinf(p);
  return AbsoluteNorm(std::make_shared<const Impl>(
      Impl{PRep{max_norm ? std::numeric_limits<double>::infinity() : p, max_norm}}));
}

AbsoluteNorm AbsoluteNorm::infinity() {
  return p(std::numeric_limits<double>::infinity());
}

AbsoluteNorm AbsoluteNorm::polygonal(std::vector<Point2> vertices) {
  return AbsoluteNorm(
      std::make_shared<const Impl>(Impl{make_polygon(std::move(vertices), true)}));
}

AbsoluteNorm AbsoluteNorm::polygonal_unchecked(std::vector<Point2> vertices) {
  return AbsoluteNorm(
      std::make_shared<const Impl>(Impl{make_polygon(std::move(vertices), false)}));
}

AbsoluteNorm AbsoluteNorm::swapped(const AbsoluteNorm& inner) {
  return AbsoluteNorm(std::make_shared<const Impl>(Impl{SwappedRep{inner}}));
}

AbsoluteNorm AbsoluteNorm::dual_numeric(const AbsoluteNorm& inner,
                                        int resolution) {
  if (resolution < 8) {
    throw Error(ErrorCode::kInvalidArgument, "dual resolution must be >= 8");
  }
  auto table = detail::build_dual_table(inner, resolution);
  return AbsoluteNorm(std::make_shared<const Impl>(
      Impl{DualRep{inner, resolution, std::move(table)}}));
}

AbsoluteNorm::Kind AbsoluteNorm::kind() const {
  return static_cast<Kind>(impl_->rep.index());
}

double AbsoluteNorm::operator()(double a, double b) const {
  a = std::abs(a);
  b = std::abs(b);
  return std::visit(
      [a, b](const auto& rep) -> double {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, PRep>) {
          return eval_p(rep, a, b);
        } else if constexpr (std::is_same_v<T, PolygonRep>) {
          return eval_polygon(rep, a, b);
        } else if constexpr (std::is_same_v<T, SwappedRep>) {
          return rep.inner(b, a);
        } else {
          return detail::dual_value(rep.inner, rep.table, a, b);
        }
      },
      impl_->rep);
}

double AbsoluteNorm::exponent() const {
  const auto* rep = std::get_if<PRep>(&impl_->rep);
  if (rep == nullptr) throw Error(ErrorCode::kInvalidArgument, "not a p-norm");
  return rep->p;
}

bool AbsoluteNorm::is_max_norm() const {
  const auto* rep = std::get_if<PRep>(&impl_->rep);
  return rep != nullptr && rep->max_norm;
}

const std::vector<Point2>& AbsoluteNorm::vertices() const {
  const auto* rep = std::get_if<PolygonRep>(&impl_->rep);
  if (rep == nullptr) throw Error(ErrorCode::kInvalidArgument, "not a polygon");
  return rep->vertices;
}

bool AbsoluteNorm::convex() const {
  const auto* rep = std::get_if<PolygonRep>(&impl_->rep);
  return rep == nullptr || rep->convex;
}

const AbsoluteNorm& AbsoluteNorm::inner() const {
  if (const auto* s = std::get_if<SwappedRep>(&impl_->rep)) return s->inner;
  if (const auto* d = std::get_if<DualRep>(&impl_->rep)) return d->inner;
  throw Error(ErrorCode::kInvalidArgument, "norm has no inner norm");
}

int AbsoluteNorm::resolution() const {
  const auto* rep = std::get_if<DualRep>(&impl_->rep);
  if (rep == nullptr) throw Error(ErrorCode::kInvalidArgument, "not a dual handle");
  return rep->resolution;
}

std::optional<std::vector<Point2>> AbsoluteNorm::exact_polygon() const {
  if (const auto* p = std::get_if<PolygonRep>(&impl_->rep)) {
    if (!p->convex) return std::nullopt;
    return p->vertices;
  }
  if (const auto* s = std::get_if<SwappedRep>(&impl_->rep)) {
    auto inner = s->inner.exact_polygon();
    if (!inner) return std::nullopt;
    std::vector<Point2> mirrored(inner->rbegin(), inner->rend());
    for (auto& v : mirrored) std::swap(v.a, v.b);
    return mirrored;
  }
  return std::nullopt;
}

Point2 boundary_bracket(const AbsoluteNorm& norm, double t, double tol) {
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "boundary tolerance must be > 0");
  }
  t = std::abs(t);
  if (t > 1.0 + 1e-15) {
    throw Error(ErrorCode::kInvalidArgument, "boundary parameter must lie in [-1,1]");
  }
  t = std::min(t, 1.0);
  if (norm(t, 1.0) <= 1.0) return {1.0, 1.0};
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (norm(t, mid) <= 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

double boundary(const AbsoluteNorm& norm, double t, double tol) {
  const double at = std::abs(t);
  // closed form for p-norms; bisection near t = 1 would stall where
  // F(1, b) rounds to 1
  if (norm.kind() == AbsoluteNorm::Kind::kP && at <= 1.0 && tol > 0.0) {
    const double p = norm.exponent();
    if (norm.is_max_norm()) return 1.0;
    if (p == 1.0) return 1.0 - at;
    if (p == 2.0) return std::sqrt((1.0 - at) * (1.0 + at));
    return std::pow(1.0 - std::pow(at, p), 1.0 / p);
  }
  const Point2 br = boundary_bracket(norm, t, tol);
  if (std::abs(t) >= 1.0) return br.a;
  return 0.5 * (br.a + br.b);
}

AbsoluteNorm swap(const AbsoluteNorm& norm) {
  if (norm.kind() == AbsoluteNorm::Kind::kSwapped) return norm.inner();
  return AbsoluteNorm::swapped(norm);
}

Point2 sphere_point(const AbsoluteNorm& norm, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double r = norm(c, s);
  return {c / r, s / r};
}

VerificationReport validate(const AbsoluteNorm& norm, int resolution,
                            double tol) {
  if (resolution < 2) {
    throw Error(ErrorCode::kInvalidArgument, "validate resolution must be >= 2");
  }
  VerificationReport report;
  report.claim_id = "norm-facts";
  report.parameters = {{"resolution", resolution}, {"tol", tol}};
  MarginTracker tracker;
  const int n = resolution;
  auto scaled = [tol](double s) { return tol * (1.0 + s); };

  for (const Point2 axis : {Point2{1.0, 0.0}, Point2{0.0, 1.0}}) {
    const double value = norm(axis.a, axis.b);
    tracker.count();
    tracker.observe(tol - std::abs(value - 1.0), [&] {
      return nlohmann::json{{"check", "normalised"}, {"point", {axis.a, axis.b}},
                            {"F", value}};
    });
  }

  std::vector<double> grid(static_cast<std::size_t>((n + 1) * (n + 1)));
  auto at = [&](int i, int j) -> double& { return grid[i * (n + 1) + j]; };
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double a = static_cast<double>(i) / n;
      const double b = static_cast<double>(j) / n;
      const double value = norm(a, b);
      at(i, j) = value;
      tracker.count();
      const double slack = std::min(value - std::max(a, b), a + b - value);
      tracker.observe(slack + scaled(a + b), [&] {
        return nlohmann::json{{"check", "sandwich"}, {"point", {a, b}},
                              {"F", value}, {"max", std::max(a, b)},
                              {"sum", a + b}};
      });
    }
  }
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double a = static_cast<double>(i) / n;
      const double b = static_cast<double>(j) / n;
      if (i < n) {
        tracker.count();
        tracker.observe(at(i + 1, j) - at(i, j) + scaled(2.0), [&] {
          return nlohmann::json{{"check", "monotone"}, {"point", {a, b}},
                                {"larger", {static_cast<double>(i + 1) / n, b}},
                                {"F", at(i, j)}, {"F_larger", at(i + 1, j)}};
        });
      }
      if (j < n) {
        tracker.count();
        tracker.observe(at(i, j + 1) - at(i, j) + scaled(2.0), [&] {
          return nlohmann::json{{"check", "monotone"}, {"point", {a, b}},
                                {"larger", {a, static_cast<double>(j + 1) / n}},
                                {"F", at(i, j)}, {"F_larger", at(i, j + 1)}};
        });
      }
    }
  }

  const int m = 4 * n;
  std::vector<Point2> circle;
  circle.reserve(m);
  for (int k = 0; k < m; ++k) {
    circle.push_back(sphere_point(norm, 2.0 * std::numbers::pi * k / m));
  }
  for (int k = 0; k < m; ++k) {
    for (int l = k + 1; l < m; ++l) {
      const Point2 mid{0.5 * (circle[k].a + circle[l].a),
                       0.5 * (circle[k].b + circle[l].b)};
      const double value = norm(mid.a, mid.b);
      tracker.count();
      tracker.observe(1.0 + scaled(1.0) - value, [&] {
        return nlohmann::json{{"check", "convex"},
                              {"p", {circle[k].a, circle[k].b}},
                              {"q", {circle[l].a, circle[l].b}},
                              {"F_midpoint", value}};
      });
    }
  }
  tracker.finish(report);
  return report;
}

}  // namespace absnorm

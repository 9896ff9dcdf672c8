#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>

#include "absnorm/errors.hpp"
#include "absnorm/space.hpp"
#include "cover.hpp"

namespace absnorm {

namespace {

using detail::Cell;
using detail::SphereCover;

constexpr double kUnitTol = 1e-6;
constexpr int kMaxCertifiedDim = 4;

struct Plan {
  int level;
  long resolution;
  bool certified;
};

Plan plan(const SphereCover& cover, const SearchOptions& options) {
  if (options.resolution < 0) {
    throw Error(ErrorCode::kInvalidArgument, "resolution must be nonnegative");
  }
  const long wanted =
      options.resolution > 0 ? options.resolution : default_resolution(cover.dim());
  const int level = cover.level_for(wanted);
  return {level, cover.cells_at(level), cover.dim() <= kMaxCertifiedDim};
}

void require_unit(const FiniteSpace& space, std::span<const double> x, const char* what) {
  const double n = norm(space, x);
  if (std::abs(n - 1.0) > kUnitTol) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " must be a unit vector, has norm " + std::to_string(n));
  }
}

double distance(const FiniteSpace& space, const Vector& a, const Vector& b) {
  Vector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return space.norm(d);
}

Interval clamp(Interval v, double lo, double hi) {
  return {std::clamp(v.lo, lo, hi), std::clamp(v.hi, lo, hi)};
}

// min(||x+y||, ||x-y||)
double pair_min(const FiniteSpace& space, std::span<const double> x, const Vector& y) {
  Vector plus(y.size()), minus(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    plus[i] = x[i] + y[i];
    minus[i] = x[i] - y[i];
  }
  return std::min(space.norm(plus), space.norm(minus));
}

// max(| ||x+y|| - 1 |, | ||x-y|| - 1 |)
double square_defect(const FiniteSpace& space, std::span<const double> x, const Vector& y) {
  Vector plus(y.size()), minus(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    plus[i] = x[i] + y[i];
    minus[i] = x[i] - y[i];
  }
  return std::max(std::abs(space.norm(plus) - 1.0), std::abs(space.norm(minus) - 1.0));
}

PointBracket to_bracket(const detail::SearchResult& r, bool certified) {
  PointBracket out;
  out.value = r.value;
  out.argbest = r.arg;
  out.evaluations = r.evaluations;
  out.certified = certified;
  out.budget_exhausted = r.exhausted;
  return out;
}

// Inner searches run serially; the outer level is the parallel one.
detail::SearchResult inner_m(const SphereCover& cover, int level, std::span<const double> x,
                             double gap, long budget) {
  return detail::maximize(
      cover, level,
      [&](const Vector& y) {
        const double v = pair_min(cover.space(), x, y);
        return Interval{v, v};
      },
      gap, budget, false);
}

detail::SearchResult inner_defect(const SphereCover& cover, int level,
                                  std::span<const double> x, double gap, long budget,
                                  bool parallel) {
  return detail::minimize(
      cover, level,
      [&](const Vector& y) {
        const double v = square_defect(cover.space(), x, y);
        return Interval{v, v};
      },
      gap, budget, parallel);
}

}  // namespace

long default_resolution(int dim) {
  switch (dim) {
    case 1:
      return 2;
    case 2:
      return 2048;
    case 3:
      return 40000;
    case 4:
      return 250000;
    default:
      return 10000;
  }
}

PointBracket m_of_x(const FiniteSpace& space, std::span<const double> x,
                    const SearchOptions& options) {
  require_unit(space, x, "x");
  const SphereCover cover(space);
  const Plan p = plan(cover, options);
  const auto r = detail::maximize(
      cover, p.level,
      [&](const Vector& y) {
        const double v = pair_min(space, x, y);
        return Interval{v, v};
      },
      options.gap, options.budget, true);
  PointBracket out = to_bracket(r, p.certified);
  out.value = clamp(out.value, 0.0, 2.0);
  if (!p.certified) out.value.hi = 2.0;
  return out;
}

ModuliReport s_modulus(const FiniteSpace& space, const SearchOptions& options) {
  ModuliReport report;
  report.gap = options.gap;
  if (space.dim() == 1) {
    // the only unit vectors are +-1 and min(|x+y|, |x-y|) = 0 for y = +-x
    report.s = Interval{0.0, 0.0};
    report.witness = {1.0 / space.norm(Vector{1.0})};
    return report;
  }
  const SphereCover cover(space);
  const Plan p = plan(cover, options);
  std::atomic<long> inner_evals{0};
  const auto r = detail::minimize(
      cover, p.level,
      [&](const Vector& x) {
        const auto m = inner_m(cover, p.level, x, options.gap / 2.0, options.budget);
        inner_evals += m.evaluations;
        return clamp(m.value, 0.0, 2.0);
      },
      options.gap, options.budget, true);
  report.s = clamp(r.value, 0.0, 2.0);
  report.resolution = p.resolution;
  report.lipschitz_margin = r.margin;
  report.certified = p.certified;
  report.budget_exhausted = r.exhausted;
  report.evaluations = r.evaluations + inner_evals.load();
  report.witness = r.arg;
  report.witness_inner = r.arg_bracket;
  if (!p.certified) report.s->lo = 0.0;
  return report;
}

ModuliReport lasq_defect(const FiniteSpace& space, const SearchOptions& options) {
  ModuliReport report;
  report.gap = options.gap;
  const SphereCover cover(space);
  const Plan p = plan(cover, options);
  std::atomic<long> inner_evals{0};
  const auto r = detail::maximize(
      cover, p.level,
      [&](const Vector& x) {
        const auto d =
            inner_defect(cover, p.level, x, options.gap / 2.0, options.budget, false);
        inner_evals += d.evaluations;
        return clamp(d.value, 0.0, 1.0);
      },
      options.gap, options.budget, true);
  report.lasq_defect = clamp(r.value, 0.0, 1.0);
  report.resolution = p.resolution;
  report.lipschitz_margin = r.margin;
  report.certified = p.certified;
  report.budget_exhausted = r.exhausted;
  report.evaluations = r.evaluations + inner_evals.load();
  report.witness = r.arg;
  report.witness_inner = r.arg_bracket;
  if (!p.certified) report.lasq_defect->hi = 1.0;
  return report;
}

PointBracket lasq_defect_at(const FiniteSpace& space, std::span<const double> x,
                            const SearchOptions& options) {
  require_unit(space, x, "x");
  const SphereCover cover(space);
  const Plan p = plan(cover, options);
  const auto r = inner_defect(cover, p.level, x, options.gap, options.budget, true);
  PointBracket out = to_bracket(r, p.certified);
  out.value = clamp(out.value, 0.0, 1.0);
  if (!p.certified) out.value.lo = 0.0;
  return out;
}

PointBracket oh_radius(const FiniteSpace& space, const std::vector<Vector>& points,
                       const SearchOptions& options) {
  if (points.empty()) throw Error(ErrorCode::kInvalidArgument, "oh_radius needs points");
  for (const Vector& x : points) require_unit(space, x, "point");
  const SphereCover cover(space);
  const Plan p = plan(cover, options);
  const auto r = detail::maximize(
      cover, p.level,
      [&](const Vector& y) {
        double v = std::numeric_limits<double>::infinity();
        Vector sum(y.size());
        for (const Vector& x : points) {
          for (std::size_t i = 0; i < y.size(); ++i) sum[i] = x[i] + y[i];
          v = std::min(v, space.norm(sum));
        }
        return Interval{v, v};
      },
      options.gap, options.budget, true);
  PointBracket out = to_bracket(r, p.certified);
  out.value = clamp(out.value, 0.0, 2.0);
  if (!p.certified) out.value.hi = 2.0;
  return out;
}

namespace {

struct SliceCell {
  Cell cell;
  double value;  // x*(centre)
};

struct PairNode {
  std::size_t a, b;  // indices into the current cell pool
  double bound;
};

}  // namespace

PointBracket slice_diameter(const FiniteSpace& space, const SliceQuery& query,
                            const SearchOptions& options) {
  const int d = space.dim();
  if (static_cast<int>(query.functional.size()) != d) {
    throw Error(ErrorCode::kDimensionMismatch, "functional length does not match dim");
  }
  if (!(query.eps > 0.0 && query.eps < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "eps must lie in (0,1)");
  }
  const Vector& fstar = query.functional;
  auto apply = [&](const Vector& z) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += fstar[i] * z[i];
    return s;
  };
  const SphereCover cover(space);
  const Plan p = plan(cover, options);

  // The functional is assumed to have dual norm 1; check it on the cover.
  const auto dual = detail::maximize(
      cover, std::max(p.level, 12),
      [&](const Vector& z) {
        const double v = apply(z);
        return Interval{v, v};
      },
      1e-9, options.budget, false);
  if (dual.value.lo > 1.0 + kUnitTol || dual.value.hi < 1.0 - kUnitTol) {
    throw Error(ErrorCode::kInvalidArgument,
                "functional must have dual norm 1, got [" + std::to_string(dual.value.lo) +
                    ", " + std::to_string(dual.value.hi) + "]");
  }
  const double lip = std::max(1.0, dual.value.hi);
  const double floor = 1.0 - query.eps;

  // Extreme points of the closed slice lie on the sphere, so the diameter
  // is a sup over pairs of sphere points with x*(z) >= 1 - eps.
  auto make = [&](Cell c) {
    const double v = apply(c.point);
    return SliceCell{std::move(c), v};
  };
  auto candidate = [&](const SliceCell& c) { return c.value + lip * c.cell.radius >= floor; };
  auto member = [&](const SliceCell& c) { return c.value >= floor; };

  std::vector<SliceCell> pool;
  for (Cell& c : cover.roots()) pool.push_back(make(std::move(c)));

  PointBracket out;
  out.certified = p.certified;
  double best = -1.0;
  std::vector<PairNode> pairs;
  auto score = [&](std::vector<PairNode>& list) {
    for (PairNode& n : list) {
      const SliceCell& a = pool[n.a];
      const SliceCell& b = pool[n.b];
      const double dist = distance(space, a.cell.point, b.cell.point);
      n.bound = std::min({n.bound, dist + a.cell.radius + b.cell.radius, 2.0});
      if (member(a) && member(b) && dist > best) {
        best = dist;
        out.argbest = a.cell.point;
        out.argbest.insert(out.argbest.end(), b.cell.point.begin(), b.cell.point.end());
      }
    }
    out.evaluations += static_cast<long>(list.size());
  };
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!candidate(pool[i])) continue;
    for (std::size_t j = i; j < pool.size(); ++j) {
      if (candidate(pool[j])) pairs.push_back({i, j, 2.0});
    }
  }
  score(pairs);

  std::vector<Cell> kids;
  for (int level = 0; level < p.level; ++level) {
    double top = best;
    for (const PairNode& n : pairs) top = std::max(top, n.bound);
    if (best >= 0.0 && top - best <= options.gap) break;

    std::vector<SliceCell> next_pool;
    std::vector<std::pair<std::size_t, std::size_t>> span_of(pool.size(), {0, 0});
    std::vector<bool> expanded(pool.size(), false);
    auto expand = [&](std::size_t i) {
      if (expanded[i]) return;
      expanded[i] = true;
      kids.clear();
      cover.children(pool[i].cell, kids);
      const std::size_t start = next_pool.size();
      for (Cell& c : kids) next_pool.push_back(make(std::move(c)));
      span_of[i] = {start, next_pool.size()};
    };
    std::vector<PairNode> next;
    for (const PairNode& n : pairs) {
      if (!(n.bound > best)) continue;
      expand(n.a);
      expand(n.b);
      for (std::size_t i = span_of[n.a].first; i < span_of[n.a].second; ++i) {
        if (!candidate(next_pool[i])) continue;
        const std::size_t j0 = n.a == n.b ? i : span_of[n.b].first;
        for (std::size_t j = j0; j < span_of[n.b].second; ++j) {
          if (candidate(next_pool[j])) next.push_back({i, j, n.bound});
        }
      }
    }
    if (next.empty()) break;
    if (out.evaluations + static_cast<long>(next.size()) > options.budget) {
      out.budget_exhausted = true;
      break;
    }
    pool = std::move(next_pool);
    pairs = std::move(next);
    score(pairs);
  }

  if (best < 0.0) {
    throw Error(ErrorCode::kEmptySample,
                "no sample point lands in the slice at resolution " +
                    std::to_string(p.resolution));
  }
  double top = best;
  for (const PairNode& n : pairs) top = std::max(top, n.bound);
  out.value = {best, std::min(top, 2.0)};
  if (!p.certified) out.value.hi = 2.0;
  return out;
}

std::optional<Vector> exact_witness(const FiniteSpace& space, std::span<const double> x,
                                    double target, const SearchOptions& options,
                                    double tol) {
  if (!(target >= 0.0 && target <= 2.0)) {
    throw Error(ErrorCode::kInvalidArgument, "target must lie in [0,2]");
  }
  const PointBracket m = m_of_x(space, x, options);
  if (m.value.lo >= target - tol) return m.argbest;
  return std::nullopt;
}

}  // namespace absnorm

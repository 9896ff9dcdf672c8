#include "cover.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

namespace absnorm::detail {

namespace {

constexpr int kMaxExactSpreadDim = 20;
// absorbs rounding in the norm evaluations behind each bound
constexpr double kRoundoff = 1e-12;

Vector scaled(const Vector& u, double s) {
  Vector out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] * s;
  return out;
}

double distance(const FiniteSpace& space, const Vector& a, const Vector& b) {
  Vector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return space.norm(d);
}

}  // namespace

SphereCover::SphereCover(FiniteSpace space) : space_(std::move(space)) {
  const int d = space_.dim();
  if (d < 3) return;
  face_spread_.assign(d, 0.0);
  Vector e(d);
  for (int k = 0; k < d; ++k) {
    double spread = 0.0;
    if (d - 1 <= kMaxExactSpreadDim) {
      // max of a convex function over the box sits at a vertex
      for (unsigned long mask = 0; mask < (1UL << (d - 1)); ++mask) {
        int bit = 0;
        for (int j = 0; j < d; ++j) {
          if (j == k) {
            e[j] = 0.0;
            continue;
          }
          e[j] = (mask >> bit++) & 1UL ? -1.0 : 1.0;
        }
        spread = std::max(spread, space_.norm(e));
      }
    } else {
      for (int j = 0; j < d; ++j) {
        if (j == k) continue;
        std::fill(e.begin(), e.end(), 0.0);
        e[j] = 1.0;
        spread += space_.norm(e);
      }
    }
    face_spread_[k] = spread;
  }
}

Cell SphereCover::arc(double theta, double half) const {
  auto at = [&](double t) {
    Vector u{std::cos(t), std::sin(t)};
    return scaled(u, 1.0 / space_.norm(u));
  };
  Cell cell;
  cell.center = {theta};
  cell.half = half;
  cell.point = at(theta);
  // In a normed plane the distance from a fixed unit vector grows
  // monotonically along the sphere, so the arc ends are the far points.
  cell.radius = std::max(distance(space_, cell.point, at(theta - half)),
                         distance(space_, cell.point, at(theta + half)));
  return cell;
}

Cell SphereCover::face(int axis, double sign, Vector center, double half) const {
  const int d = dim();
  Vector u(d);
  int j = 0;
  for (int i = 0; i < d; ++i) u[i] = i == axis ? sign : center[j++];
  const double n = space_.norm(u);
  Cell cell;
  cell.face = axis;
  cell.sign = sign;
  cell.center = std::move(center);
  cell.half = half;
  cell.point = scaled(u, 1.0 / n);
  // ||u/|u| - v/|v||| <= 2 ||u - v|| / |u|, and ||u - v|| <= half * spread.
  cell.radius = 2.0 * half * face_spread_[axis] / n;
  return cell;
}

std::vector<Cell> SphereCover::roots() const {
  const int d = dim();
  std::vector<Cell> out;
  if (d == 1) {
    for (double s : {1.0, -1.0}) {
      Cell cell;
      cell.sign = s;
      cell.point = {s / space_.norm(Vector{1.0})};
      out.push_back(cell);
    }
    return out;
  }
  if (d == 2) {
    // centred on the axes and diagonals so that both get sampled exactly
    const double q = std::numbers::pi / 4.0;
    for (int k = 0; k < 8; ++k) out.push_back(arc(k * q, q / 2.0));
    return out;
  }
  for (int axis = 0; axis < d; ++axis) {
    for (double s : {1.0, -1.0}) out.push_back(face(axis, s, Vector(d - 1, 0.0), 1.0));
  }
  return out;
}

void SphereCover::children(const Cell& cell, std::vector<Cell>& out) const {
  const int d = dim();
  if (d == 1) return;
  const double h = cell.half / 2.0;
  if (d == 2) {
    out.push_back(arc(cell.center[0] - h, h));
    out.push_back(arc(cell.center[0] + h, h));
    return;
  }
  const unsigned long count = 1UL << (d - 1);
  for (unsigned long mask = 0; mask < count; ++mask) {
    Vector c = cell.center;
    for (int j = 0; j < d - 1; ++j) c[j] += (mask >> j) & 1UL ? h : -h;
    out.push_back(face(cell.face, cell.sign, std::move(c), h));
  }
}

long SphereCover::cells_at(int level) const {
  const int d = dim();
  if (d == 1) return 2;
  if (d == 2) return 8L << level;
  const double count = 2.0 * d * std::pow(2.0, (d - 1.0) * level);
  return count > 9e18 ? std::numeric_limits<long>::max() : static_cast<long>(count);
}

int SphereCover::level_for(long resolution) const {
  if (dim() == 1) return 0;
  int level = 0;
  while (cells_at(level) < resolution && level < 60) ++level;
  return level;
}

std::vector<Cell> cells_at_level(const SphereCover& cover, int level) {
  std::vector<Cell> cells = cover.roots();
  std::vector<Cell> next;
  for (int l = 0; l < level; ++l) {
    next.clear();
    for (const Cell& c : cells) cover.children(c, next);
    cells.swap(next);
  }
  return cells;
}

std::vector<Vector> sphere_samples(const FiniteSpace& space, long resolution) {
  const SphereCover cover(space);
  std::vector<Cell> cells = cells_at_level(cover, cover.level_for(resolution));
  std::vector<Vector> out;
  out.reserve(cells.size());
  for (Cell& c : cells) out.push_back(std::move(c.point));
  return out;
}

int worker_count() {
  if (const char* env = std::getenv("ABSNORM_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, bool parallel,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      parallel ? std::min<std::size_t>(worker_count(), n / 16) : 1;
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) body(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

struct Node {
  Cell cell;
  Interval f;
  double bound;
};

}  // namespace

SearchResult maximize(const SphereCover& cover, int max_level, const Objective& f,
                      double gap, long budget, bool parallel) {
  SearchResult res;
  double best = -std::numeric_limits<double>::infinity();

  auto evaluate = [&](std::vector<Node>& nodes) {
    parallel_for(nodes.size(), parallel, [&](std::size_t i) {
      Node& n = nodes[i];
      n.f = f(n.cell.point);
      n.bound = std::min(n.bound, n.f.hi + n.cell.radius + kRoundoff);
    });
    res.evaluations += static_cast<long>(nodes.size());
  };
  auto track = [&](const std::vector<Node>& nodes) {
    for (const Node& n : nodes) {
      if (n.f.lo > best) {
        best = n.f.lo;
        res.arg = n.cell.point;
        res.arg_bracket = n.f;
      }
    }
  };

  std::vector<Node> nodes;
  for (Cell& c : cover.roots()) {
    nodes.push_back({std::move(c), {}, std::numeric_limits<double>::infinity()});
  }
  evaluate(nodes);
  track(nodes);

  std::vector<Cell> kids;
  while (true) {
    double top = best;
    for (const Node& n : nodes) top = std::max(top, n.bound);
    if (top - best <= gap || res.level >= max_level) break;
    std::vector<Node> next;
    for (const Node& n : nodes) {
      if (!(n.bound > best)) continue;
      kids.clear();
      cover.children(n.cell, kids);
      for (Cell& c : kids) next.push_back({std::move(c), {}, n.bound});
    }
    if (next.empty()) break;
    if (res.evaluations + static_cast<long>(next.size()) > budget) {
      res.exhausted = true;
      break;
    }
    evaluate(next);
    nodes = std::move(next);
    track(nodes);
    ++res.level;
  }
  double top = best;
  for (const Node& n : nodes) {
    top = std::max(top, n.bound);
    if (n.bound > best) res.margin = std::max(res.margin, n.bound - n.f.lo);
  }
  res.value = {best, top};
  return res;
}

SearchResult minimize(const SphereCover& cover, int max_level, const Objective& f,
                      double gap, long budget, bool parallel) {
  auto negated = [&](const Vector& x) {
    const Interval v = f(x);
    return Interval{-v.hi, -v.lo};
  };
  SearchResult res = maximize(cover, max_level, negated, gap, budget, parallel);
  res.value = {-res.value.hi, -res.value.lo};
  res.arg_bracket = {-res.arg_bracket.hi, -res.arg_bracket.lo};
  return res;
}

}  // namespace absnorm::detail

#include "absnorm/bm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "absnorm/constants.hpp"
#include "absnorm/errors.hpp"
#include "absnorm/spec_io.hpp"
#include "cover.hpp"

namespace absnorm {

namespace {

using Matrix = Eigen::MatrixXd;
using nlohmann::json;

constexpr int kMaxBmDim = 3;
constexpr int kMaxVertexDim = 20;
constexpr double kStartStep = 0.25;
constexpr double kFinalStep = 1e-10;
constexpr int kMaxSweeps = 200;
constexpr int kCertifiedCandidates = 4;

Matrix to_matrix(int n, const Vector& entries) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = entries[i * n + j];
  }
  return m;
}

Vector to_entries(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  Vector out(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out[i * n + j] = m(i, j);
  }
  return out;
}

Vector multiply(int n, const Vector& m, std::span<const double> x) {
  Vector out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += m[i * n + j] * x[j];
    out[i] = acc;
  }
  return out;
}

// Radical inverse in the given base: the k-th Halton coordinate.
double radical_inverse(unsigned k, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (k > 0) {
    result += f * (k % base);
    k /= base;
    f /= base;
  }
  return result;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23};

std::vector<Vector> vertices_of(const FiniteSpace& space) {
  const int n = space.dim();
  std::vector<Vector> out;
  if (space.kind() != FiniteSpace::Kind::kP || n > kMaxVertexDim) return out;
  const double p = space.exponent();
  if (p == 1.0) {
    for (int j = 0; j < n; ++j) {
      Vector e(n, 0.0);
      e[j] = 1.0;
      out.push_back(e);
    }
  } else if (std::isinf(p)) {
    // first sign fixed: ||T(-v)|| = ||Tv||
    for (unsigned long mask = 0; mask < (1UL << (n - 1)); ++mask) {
      Vector v(n, 1.0);
      for (int j = 1; j < n; ++j) v[j] = (mask >> (j - 1)) & 1UL ? -1.0 : 1.0;
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace

LinearMap::LinearMap(int dim, Vector entries) : dim_(dim), entries_(std::move(entries)) {
  if (dim < 1) throw Error(ErrorCode::kInvalidArgument, "map dim must be positive");
  if (static_cast<int>(entries_.size()) != dim * dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "map needs " + std::to_string(dim * dim) + " entries, got " +
                    std::to_string(entries_.size()));
  }
  for (double v : entries_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "map entry is not finite");
  }
  Eigen::FullPivLU<Matrix> lu(to_matrix(dim, entries_));
  if (!lu.isInvertible()) throw Error(ErrorCode::kSingularMatrix, "map is singular");
}

LinearMap LinearMap::identity(int dim) {
  Vector e(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) e[i * dim + i] = 1.0;
  return LinearMap(dim, std::move(e));
}

Vector LinearMap::apply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) {
    throw Error(ErrorCode::kDimensionMismatch, "vector length does not match the map");
  }
  return multiply(dim_, entries_, x);
}

LinearMap LinearMap::inverse() const {
  return LinearMap(dim_, to_entries(to_matrix(dim_, entries_).inverse()));
}

LinearMap LinearMap::compose(const LinearMap& inner) const {
  if (inner.dim_ != dim_) throw Error(ErrorCode::kDimensionMismatch, "map dims differ");
  return LinearMap(dim_, to_entries(to_matrix(dim_, entries_) * to_matrix(dim_, inner.entries_)));
}

double LinearMap::condition() const {
  Eigen::JacobiSVD<Matrix> svd(to_matrix(dim_, entries_));
  const auto& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

FiniteSpace pushforward(const FiniteSpace& X, const LinearMap& T) {
  if (X.dim() != T.dim()) throw Error(ErrorCode::kDimensionMismatch, "map and space dims differ");
  return FiniteSpace::mapped(X, T.inverse().entries());
}

PointBracket operator_norm(const LinearMap& T, const FiniteSpace& from,
                           const FiniteSpace& to, const SearchOptions& options) {
  if (from.dim() != T.dim() || to.dim() != T.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "map, domain and target dims must agree");
  }
  const auto vertices = vertices_of(from);
  if (!vertices.empty()) {
    PointBracket out;
    double best = -1.0;
    for (const Vector& v : vertices) {
      const double value = to.norm(T.apply(v)) / from.norm(v);
      ++out.evaluations;
      if (value > best) {
        best = value;
        out.argbest = v;
      }
    }
    const double scale = from.norm(out.argbest);
    for (double& x : out.argbest) x /= scale;
    out.value = {best, best};
    return out;
  }

  const detail::SphereCover cover(from);
  const long wanted =
      options.resolution > 0 ? options.resolution : default_resolution(from.dim());
  const int level = cover.level_for(wanted);
  // ||Tx|| is ||T||-Lipschitz; bound ||T|| <= M / (1 - r) from a level whose
  // cells all have radius r < 1/2, then search the 1-Lipschitz ||Tx|| / L.
  double lip = 0.0;
  for (int l = 0; l <= 30; ++l) {
    const auto cells = detail::cells_at_level(cover, l);
    double r = 0.0, m = 0.0;
    for (const auto& c : cells) {
      r = std::max(r, c.radius);
      m = std::max(m, to.norm(T.apply(c.point)));
    }
    if (r < 0.5) {
      lip = m / (1.0 - r);
      break;
    }
  }
  if (!(lip > 0.0)) {
    throw Error(ErrorCode::kResolutionExhausted, "could not bound the map's Lipschitz constant");
  }
  const auto r = detail::maximize(
      cover, level,
      [&](const Vector& x) {
        const double v = to.norm(T.apply(x)) / lip;
        return Interval{v, v};
      },
      options.gap / lip, options.budget, true);
  PointBracket out;
  out.value = {r.value.lo * lip, r.value.hi * lip};
  out.argbest = r.arg;
  out.evaluations = r.evaluations;
  out.certified = from.dim() <= 4;
  out.budget_exhausted = r.exhausted;
  return out;
}

BmResult bm_upper(const FiniteSpace& X, const FiniteSpace& Y, int restarts, long resolution) {
  const int n = X.dim();
  if (Y.dim() != n) throw Error(ErrorCode::kDimensionMismatch, "spaces have different dims");
  if (n > kMaxBmDim) {
    throw Error(ErrorCode::kInvalidArgument,
                "bm_upper supports dim <= 3, got " + std::to_string(n));
  }
  if (restarts < 1) throw Error(ErrorCode::kInvalidArgument, "restarts must be positive");

  // Cheap sampled objective for the descent; the result is certified below.
  const long sample_res = n == 1 ? 2 : (n == 2 ? 256 : 1536);
  const auto xs = detail::sphere_samples(X, sample_res);
  const auto ys = detail::sphere_samples(Y, sample_res);
  auto estimate = [&](const Vector& m) {
    const Matrix a = to_matrix(n, m);
    const Eigen::FullPivLU<Matrix> lu(a);
    if (!lu.isInvertible()) return std::numeric_limits<double>::infinity();
    const Vector inv = to_entries(lu.inverse());
    double forward = 0.0, backward = 0.0;
    for (const Vector& x : xs) forward = std::max(forward, Y.norm(multiply(n, m, x)));
    for (const Vector& y : ys) backward = std::max(backward, X.norm(multiply(n, inv, y)));
    return forward * backward;
  };

  // Start schedule: signed permutations (identity first), then Halton points
  // in [-1,1]^(n*n).
  std::vector<Vector> starts;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (unsigned long signs = 0; signs < (1UL << n); ++signs) {
      Vector m(static_cast<std::size_t>(n) * n, 0.0);
      for (int i = 0; i < n; ++i) m[i * n + perm[i]] = (signs >> i) & 1UL ? -1.0 : 1.0;
      starts.push_back(m);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (static_cast<int>(starts.size()) > restarts) starts.resize(restarts);
  for (unsigned k = 1; static_cast<int>(starts.size()) < restarts; ++k) {
    Vector m(static_cast<std::size_t>(n) * n);
    for (int e = 0; e < n * n; ++e) m[e] = 2.0 * radical_inverse(k, kPrimes[e]) - 1.0;
    if (std::abs(to_matrix(n, m).determinant()) < 1e-3) continue;
    starts.push_back(m);
  }

  std::vector<std::pair<double, Vector>> finals(starts.size());
  detail::parallel_for(starts.size(), true, [&](std::size_t s) {
    Vector m = starts[s];
    double scale = 0.0;
    for (double v : m) scale = std::max(scale, std::abs(v));
    double current = estimate(m);
    for (double h = kStartStep; h >= kFinalStep; h *= 0.5) {
      for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool improved = false;
        for (int e = 0; e < n * n; ++e) {
          for (double sign : {1.0, -1.0}) {
            Vector trial = m;
            trial[e] += sign * h * scale;
            const double v = estimate(trial);
            if (v < current) {
              current = v;
              m = std::move(trial);
              improved = true;
              break;
            }
          }
        }
        if (!improved) break;
      }
    }
    finals[s] = {current, m};
  });
  std::stable_sort(finals.begin(), finals.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  SearchOptions certify;
  certify.resolution = resolution > 0 ? resolution : (n == 2 ? 1L << 16 : default_resolution(n));
  certify.gap = 1e-9;
  BmResult best;
  best.value = std::numeric_limits<double>::infinity();
  best.starts = static_cast<int>(starts.size());
  const int candidates = std::min<int>(kCertifiedCandidates, static_cast<int>(finals.size()));
  for (int c = 0; c < candidates; ++c) {
    if (!std::isfinite(finals[c].first)) continue;
    const LinearMap T(n, finals[c].second);
    const auto fwd = operator_norm(T, X, Y, certify);
    const auto bwd = operator_norm(T.inverse(), Y, X, certify);
    const double value = fwd.value.hi * bwd.value.hi;
    if (value < best.value) {
      best.value = value;
      best.map = T;
      best.forward = fwd.value;
      best.backward = bwd.value;
    }
  }
  return best;
}

VerificationReport check_s_isometry_invariance(const FiniteSpace& X, const LinearMap& T,
                                               const SearchOptions& options,
                                               const std::optional<FiniteSpace>& target) {
  const FiniteSpace Y = pushforward(X, T);
  VerificationReport report;
  report.claim_id = "prop-banach-mazur";
  report.instance = {{"X", to_spec(X)}, {"T", T.entries()}};
  report.parameters = {{"resolution", options.resolution},
                       {"gap", options.gap},
                       {"condition", T.condition()}};
  MarginTracker tracker;

  const ModuliReport sx = s_modulus(X, options);
  const ModuliReport sy = s_modulus(Y, options);
  auto bracket = [](const ModuliReport& r) { return json::array({r.s->lo, r.s->hi}); };
  report.parameters["s_X"] = bracket(sx);
  report.parameters["s_Y"] = bracket(sy);
  // T is an isometry onto Y, so the two certified brackets must overlap.
  tracker.observe(std::min(sy.s->hi - sx.s->lo, sx.s->hi - sy.s->lo), [&] {
    return json{{"s_X", bracket(sx)}, {"s_Y", bracket(sy)}};
  });
  tracker.count(2);

  if (target) {
    report.instance["target"] = to_spec(*target);
    SearchOptions op;
    op.resolution = options.resolution;
    op.gap = 1e-9;
    const auto fwd = operator_norm(T, X, *target, op);
    const auto bwd = operator_norm(T.inverse(), *target, X, op);
    const double delta = std::max(0.0, fwd.value.hi * bwd.value.hi - 1.0);
    const ModuliReport sz = s_modulus(*target, options);
    report.parameters["delta"] = delta;
    report.parameters["c"] = kNearIsometryConstant;
    report.parameters["s_target"] = bracket(sz);
    const double slack = kNearIsometryConstant * delta;
    tracker.observe(std::min(sz.s->hi - (sx.s->lo - slack), sx.s->hi - (sz.s->lo - slack)), [&] {
      return json{{"s_X", bracket(sx)}, {"s_target", bracket(sz)}, {"delta", delta},
                  {"norm_T", fwd.value.hi}, {"norm_T_inverse", bwd.value.hi}};
    });
    tracker.count(1);
  }
  tracker.finish(report);
  return report;
}

}  // namespace absnorm

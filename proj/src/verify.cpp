#include "absnorm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "absnorm/constants.hpp"
#include "absnorm/errors.hpp"
#include "absnorm/geometry.hpp"
#include "absnorm/spec_io.hpp"
#include "cover.hpp"

namespace absnorm {

namespace {

using nlohmann::json;

constexpr double kBoundaryTol = 1e-13;
constexpr double kLoh2Tau = 1e-9;
constexpr double kLoh2Slack = 1e-6;

Vector axpy(const Vector& x, double s, const Vector& p) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + s * p[i];
  return out;
}

std::vector<Point2> arc_samples(const AbsoluteNorm& F, int n) {
  std::vector<Point2> arc;
  for (int k = 0; k <= n; ++k) arc.push_back(sphere_point(F, 0.5 * std::numbers::pi * k / n));
  arc.front() = {1.0, 0.0};
  arc.back() = {0.0, 1.0};
  return arc;
}

void require_sum_dim(const FiniteSpace& X, const FiniteSpace& Y) {
  if (X.dim() + Y.dim() > 4) {
    throw Error(ErrorCode::kCertificationUnavailable,
                "sum has dim " + std::to_string(X.dim() + Y.dim()) +
                    "; certified moduli need dim <= 4");
  }
}

json interval_json(const Interval& v) { return json::array({v.lo, v.hi}); }

}  // namespace

VerificationReport check_lemma_infty(const AbsoluteNorm& F, int resolution) {
  if (resolution < 2) throw Error(ErrorCode::kInvalidArgument, "resolution must be >= 2");
  VerificationReport report;
  report.claim_id = "lemma-infty";
  report.instance = {{"F", to_spec(F)}};
  report.parameters = {{"resolution", resolution}, {"tolerance", kEqualityTau}};

  const Extreme cls = classify_extremes(F, resolution);
  double dev_one = 0.0, dev_max = 0.0;
  Point2 at_one{}, at_max{};
  for (int i = 0; i <= resolution; ++i) {
    for (int j = 0; j <= resolution; ++j) {
      const double a = static_cast<double>(i) / resolution;
      const double b = static_cast<double>(j) / resolution;
      const double v = F(a, b);
      if (std::abs(v - (a + b)) > dev_one) {
        dev_one = std::abs(v - (a + b));
        at_one = {a, b};
      }
      if (std::abs(v - std::max(a, b)) > dev_max) {
        dev_max = std::abs(v - std::max(a, b));
        at_max = {a, b};
      }
    }
  }
  MarginTracker tracker;
  tracker.count(static_cast<long>(resolution + 1) * (resolution + 1));
  auto biconditional = [&](const char* name, bool classified, double dev, Point2 at) {
    const bool agrees = dev <= kEqualityTau;
    double margin;
    if (classified == agrees) {
      margin = agrees ? kEqualityTau - dev : dev - kEqualityTau;
    } else {
      margin = -std::max(std::abs(dev - kEqualityTau), kEqualityTau);
    }
    tracker.observe(margin, [&] {
      return json{{"biconditional", name},
                  {"classification", to_string(cls)},
                  {"F11", F(1.0, 1.0)},
                  {"max_deviation", dev},
                  {"at", {at.a, at.b}},
                  {"F_at", F(at.a, at.b)}};
    });
  };
  biconditional("F(1,1)=2 <=> F = 1-norm", cls == Extreme::kOneNorm, dev_one, at_one);
  biconditional("F(1,1)=1 <=> F = max norm", cls == Extreme::kInfinityNorm, dev_max, at_max);
  tracker.finish(report);
  report.parameters["classification"] = to_string(cls);
  return report;
}

VerificationReport check_loh2(const AbsoluteNorm& F, long samples) {
  if (samples < 4) throw Error(ErrorCode::kInvalidArgument, "samples must be >= 4");
  VerificationReport report;
  report.claim_id = "lemma-loh2";
  report.instance = {{"F", to_spec(F)}};
  const long n_a = std::max(2L, static_cast<long>(std::sqrt(static_cast<double>(samples))));
  const long n_c = std::max(2L, samples / n_a);
  const double r = r_of(F);
  report.parameters = {{"a_nodes", n_a},     {"c_nodes", n_c},        {"rF", r},
                       {"equality_tau", kLoh2Tau}, {"slack", kLoh2Slack}};

  MarginTracker tracker;
  long hits = 0;
  for (long i = 0; i < n_a; ++i) {
    const double a = static_cast<double>(i) / (n_a - 1);
    const double b = boundary(F, a, kBoundaryTol);
    for (long j = 0; j < n_c; ++j) {
      const double c = j == n_c - 1 ? 1.0 + a : (1.0 + a) * j / (n_c - 1);
      const double v = F(c, b);
      tracker.count();
      if (v < 2.0 - kLoh2Tau) continue;
      ++hits;
      const double margin =
          std::min(kLoh2Slack - std::abs(c - (1.0 + a)), a - (r - kLoh2Slack));
      tracker.observe(margin, [&] {
        return json{{"a", a}, {"b", b}, {"c", c}, {"F(c,b)", v}, {"rF", r}};
      });
    }
  }
  report.parameters["hits"] = hits;
  tracker.finish(report);
  return report;
}

VerificationReport check_loh3(const AbsoluteNorm& F, double eps, int resolution) {
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps must be positive");
  if (resolution < 2) throw Error(ErrorCode::kInvalidArgument, "resolution must be >= 2");
  constexpr int kCNodes = 100;
  VerificationReport report;
  report.claim_id = "lemma-loh3";
  report.instance = {{"F", to_spec(F)}};
  const double delta = loh3_modulus(F, eps);
  const double r = r_of(F);
  report.parameters = {{"eps", eps},   {"delta", delta}, {"rF", r},
                       {"a_nodes", resolution}, {"c_nodes", kCNodes}};
  MarginTracker tracker;
  long hits = 0;
  for (int i = 0; i < resolution; ++i) {
    const double a = static_cast<double>(i) / (resolution - 1);
    const double b = boundary(F, a, kBoundaryTol);
    for (int j = 0; j < kCNodes; ++j) {
      const double c = j == kCNodes - 1 ? 1.0 + a : (1.0 + a) * j / (kCNodes - 1);
      const double v = F(c, b);
      tracker.count();
      if (v < 2.0 - delta) continue;
      ++hits;
      tracker.observe(c - (1.0 + r - eps), [&] {
        return json{{"a", a}, {"b", b}, {"c", c}, {"F(c,b)", v}, {"bound", 1.0 + r - eps}};
      });
    }
  }
  report.parameters["hits"] = hits;
  tracker.finish(report);
  return report;
}

VerificationReport check_prop_loh(const FiniteSpace& X, const FiniteSpace& Y,
                                  const AbsoluteNorm& F, double eps,
                                  const PropLohOptions& options) {
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps must be positive");
  require_sum_dim(X, Y);
  VerificationReport report;
  report.claim_id = "prop-loh";
  report.instance = {{"X", to_spec(X)}, {"Y", to_spec(Y)}, {"F", to_spec(F)}};
  const double r = r_of(F);
  const double delta = loh3_modulus(F, eps / 2.0);
  const double target = 2.0 * r - eps;
  report.parameters = {{"eps", eps},
                       {"rF", r},
                       {"delta", delta},
                       {"target", target},
                       {"resolution", options.resolution},
                       {"arc_samples", options.arc_samples}};
  MarginTracker tracker;
  if (target < 0.0) {
    report.notes.push_back("2 r_F - eps < 0: the conclusion holds for every z");
    tracker.finish(report);
    return report;
  }

  // Chain: F(||x+-u||, ||v||) >= 2 - delta  =>  ||x+-u|| >= 1 + r - eps/2,
  // ||u|| >= r - eps/2  and  ||x +- u/||u|||| >= 2 r - eps.
  const auto xs = detail::sphere_samples(X, options.resolution);
  const auto arc = arc_samples(F, options.arc_samples);
  struct Worst {
    long accepted = 0;
    double margin = std::numeric_limits<double>::infinity();
    std::size_t p = 0, k = 0;
  };
  std::vector<Worst> per_x(xs.size());
  detail::parallel_for(xs.size(), true, [&](std::size_t i) {
    Worst& w = per_x[i];
    const Vector& x = xs[i];
    for (std::size_t p = 0; p < xs.size(); ++p) {
      const Vector& dir = xs[p];
      const double to_z = std::min(X.norm(axpy(x, 1.0, dir)), X.norm(axpy(x, -1.0, dir)));
      for (std::size_t k = 0; k < arc.size(); ++k) {
        const double s = arc[k].a, t = arc[k].b;
        const double plus = X.norm(axpy(x, s, dir));
        const double minus = X.norm(axpy(x, -s, dir));
        if (std::min(F(plus, t), F(minus, t)) < 2.0 - delta) continue;
        ++w.accepted;
        double margin = s - (r - eps / 2.0);
        if (s > 0.0) {
          margin = std::min({margin, std::min(plus, minus) - (1.0 + r - eps / 2.0),
                             to_z - target});
        }
        if (margin < w.margin) {
          w.margin = margin;
          w.p = p;
          w.k = k;
        }
      }
    }
  });
  long accepted = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Worst& w = per_x[i];
    accepted += w.accepted;
    if (w.accepted == 0) continue;
    tracker.observe(w.margin, [&] {
      const Vector& x = xs[i];
      const Vector& dir = xs[w.p];
      const double s = arc[w.k].a, t = arc[w.k].b;
      return json{{"x", x},
                  {"u", axpy(Vector(x.size(), 0.0), s, dir)},
                  {"norm_v", t},
                  {"norm_x_plus_u", X.norm(axpy(x, s, dir))},
                  {"norm_x_minus_u", X.norm(axpy(x, -s, dir))},
                  {"z", dir},
                  {"norm_x_plus_z", X.norm(axpy(x, 1.0, dir))},
                  {"norm_x_minus_z", X.norm(axpy(x, -1.0, dir))}};
    });
  }
  tracker.count(static_cast<long>(xs.size() * xs.size() * arc.size()));
  report.parameters["filter_accepted"] = accepted;
  if (accepted == 0) {
    report.notes.push_back("no sampled (u,v) passed the 2 - delta filter (accepted 0 of " +
                           std::to_string(xs.size() * xs.size() * arc.size()) + ")");
  }

  // Global contrapositive: some x has m(x) < 2r - eps, so m((x,0)) < 2 - delta
  // in the sum and hence s(sum) < 2 - delta.
  const ModuliReport sx = s_modulus(X, options.factor);
  report.parameters["s_X"] = interval_json(*sx.s);
  if (sx.s->hi < target) {
    const FiniteSpace sum = FiniteSpace::sum(X, Y, F);
    SearchOptions sum_options = options.sum;
    const ModuliReport ss = s_modulus(sum, sum_options);
    report.parameters["s_sum"] = interval_json(*ss.s);
    report.parameters["s_sum_resolution"] = ss.resolution;
    report.parameters["s_sum_gap"] = sum_options.gap;
    tracker.observe((2.0 - delta) - ss.s->hi, [&] {
      return json{{"s_sum", interval_json(*ss.s)},
                  {"bound", 2.0 - delta},
                  {"witness", ss.witness}};
    });
  } else {
    report.notes.push_back("s_upper(X) is not below 2 r_F - eps; global form not applicable");
  }
  tracker.finish(report);
  return report;
}

double transfer_bound(const AbsoluteNorm& F, double mu) {
  return std::min(lasq2_modulus(F, kTransferEpsShare * mu), kTransferCapShare * mu);
}

VerificationReport check_sum_lasq_transfer(const FiniteSpace& X, const FiniteSpace& Y,
                                           const AbsoluteNorm& F, double mu,
                                           const TransferOptions& options) {
  if (!(mu > 0.0 && mu <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "mu must lie in (0,1]");
  if (classify_extremes(F) == Extreme::kInfinityNorm) {
    throw Error(ErrorCode::kInfinityNormExcluded, "the transfer needs F != max norm");
  }
  require_sum_dim(X, Y);
  VerificationReport report;
  report.claim_id = "prop-lasq-i";
  report.instance = {{"X", to_spec(X)}, {"Y", to_spec(Y)}, {"F", to_spec(F)}};
  const double g = transfer_bound(F, mu);
  report.parameters = {{"mu", mu}, {"g", g}, {"resolution", options.resolution}};
  MarginTracker tracker;

  const ModuliReport ly = lasq_defect(Y, options.factor);
  report.parameters["lambda_Y"] = interval_json(*ly.lasq_defect);
  if (ly.lasq_defect->lo < mu) {
    report.notes.push_back("lambda(Y) >= mu is not certified at this resolution");
    tracker.finish(report);
    return report;
  }

  const FiniteSpace Z = FiniteSpace::sum(X, Y, F);
  Vector w(Z.dim(), 0.0);
  std::copy(ly.witness.begin(), ly.witness.end(), w.begin() + X.dim());
  report.parameters["y"] = ly.witness;

  const auto zs = detail::sphere_samples(Z, options.resolution);
  std::vector<double> psi(zs.size());
  detail::parallel_for(zs.size(), true, [&](std::size_t i) {
    psi[i] = std::max(std::abs(Z.norm(axpy(w, 1.0, zs[i])) - 1.0),
                      std::abs(Z.norm(axpy(w, -1.0, zs[i])) - 1.0));
  });
  for (std::size_t i = 0; i < zs.size(); ++i) {
    tracker.observe(psi[i] - g, [&] {
      return json{{"w", w},
                  {"z", zs[i]},
                  {"norm_w_plus_z", Z.norm(axpy(w, 1.0, zs[i]))},
                  {"norm_w_minus_z", Z.norm(axpy(w, -1.0, zs[i]))},
                  {"psi", psi[i]}};
    });
  }
  tracker.count(static_cast<long>(zs.size()));

  const ModuliReport lz = lasq_defect(Z, options.sum);
  report.parameters["lambda_sum"] = interval_json(*lz.lasq_defect);
  tracker.observe(lz.lasq_defect->hi - g, [&] {
    return json{{"lambda_sum", interval_json(*lz.lasq_defect)}, {"g", g}};
  });
  tracker.finish(report);
  return report;
}

VerificationReport check_asq_impossible(const FiniteSpace& X, const FiniteSpace& Y,
                                        const AbsoluteNorm& F, const AsqOptions& options) {
  const double delta = asq_obstruction(F);
  VerificationReport report;
  report.claim_id = "prop-lasq-iii";
  report.instance = {{"X", to_spec(X)}, {"Y", to_spec(Y)}, {"F", to_spec(F)}};
  report.parameters = {{"delta", delta},
                       {"resolution", options.resolution},
                       {"arc_samples", options.arc_samples}};
  const auto xs = detail::sphere_samples(X, options.resolution);
  const auto ys = detail::sphere_samples(Y, options.resolution);
  const auto arc = arc_samples(F, options.arc_samples);

  // For fixed (u,v) the worst x and y can be chosen independently, so the
  // claim reduces to max(min_x A, min_y B) > 1 + delta per (s, p, t, q),
  // and then to max(min_{p,x} A, min_{q,y} B) per arc point (s,t).
  struct Side {
    double value = std::numeric_limits<double>::infinity();
    std::size_t point = 0, dir = 0;
  };
  auto scan = [&](const FiniteSpace& S, const std::vector<Vector>& pts, double scale,
                  double other, bool first) {
    Side best;
    for (std::size_t d = 0; d < pts.size(); ++d) {
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double plus = S.norm(axpy(pts[i], scale, pts[d]));
        const double minus = S.norm(axpy(pts[i], -scale, pts[d]));
        const double v = first ? std::max(F(plus, other), F(minus, other))
                               : std::max(F(other, plus), F(other, minus));
        if (v < best.value) best = {v, i, d};
      }
    }
    return best;
  };
  std::vector<std::pair<Side, Side>> per_arc(arc.size());
  detail::parallel_for(arc.size(), true, [&](std::size_t k) {
    per_arc[k] = {scan(X, xs, arc[k].a, arc[k].b, true), scan(Y, ys, arc[k].b, arc[k].a, false)};
  });
  MarginTracker tracker;
  for (std::size_t k = 0; k < arc.size(); ++k) {
    const auto& [a, b] = per_arc[k];
    tracker.observe(std::max(a.value, b.value) - (1.0 + delta), [&] {
      const double s = arc[k].a, t = arc[k].b;
      const Vector& x = xs[a.point];
      const Vector& y = ys[b.point];
      return json{{"x", x},
                  {"y", y},
                  {"u", axpy(Vector(x.size(), 0.0), s, xs[a.dir])},
                  {"v", axpy(Vector(y.size(), 0.0), t, ys[b.dir])},
                  {"F(|x+u|,|v|)", F(X.norm(axpy(x, s, xs[a.dir])), t)},
                  {"F(|x-u|,|v|)", F(X.norm(axpy(x, -s, xs[a.dir])), t)},
                  {"F(|u|,|y+v|)", F(s, Y.norm(axpy(y, t, ys[b.dir])))},
                  {"F(|u|,|y-v|)", F(s, Y.norm(axpy(y, -t, ys[b.dir])))}};
    });
  }
  tracker.count(static_cast<long>(arc.size() * (xs.size() * xs.size() + ys.size() * ys.size())));
  tracker.finish(report);
  return report;
}

}  // namespace absnorm

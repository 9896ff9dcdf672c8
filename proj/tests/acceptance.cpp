// One PASS/FAIL line per acceptance criterion, at the stated tolerances.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "absnorm/bm.hpp"
#include "absnorm/dual.hpp"
#include "absnorm/errors.hpp"
#include "absnorm/geometry.hpp"
#include "absnorm/suite.hpp"
#include "absnorm/verify.hpp"
#include "test_support.hpp"

using namespace absnorm;
using namespace absnorm::testing;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + std::string("violated: ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt2(const char* f, double a, double b) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

template <class Fn>
bool throws_code(Fn fn, ErrorCode code) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

FiniteSpace linf2() { return FiniteSpace::p(std::numeric_limits<double>::infinity(), 2); }

Outcome c1() {
  Outcome o;
  const std::pair<const char*, AbsoluteNorm> cases[] = {
      {"l1", l1()}, {"l1.5", l15()}, {"l2", l2()}, {"l3", l3()}, {"linf", linf()}};
  for (const auto& [name, F] : cases) {
    const auto t0 = Clock::now();
    const double r = r_of(F);
    const double dt = seconds_since(t0);
    const double expected = std::string(name) == "l1" ? 0.0 : 1.0;
    o.require(std::abs(r - expected) <= 1e-6, std::string("r(") + name + ")");
    o.require(dt < 1.0, std::string(name) + " under 1 s");
    o.note(std::string(name) + fmt2(" r=%.9g (%.3fs)", r, dt));
  }
  return o;
}

Outcome c2() {
  Outcome o;
  const auto exact = r_of_exact(p1());
  const double bis = r_of_bisection(p1());
  o.require(exact && *exact == 0.5, "exact path gives 0.5");
  o.require(r_of(p1()) == 0.5, "r_of dispatches to the exact path");
  o.require(std::abs(bis - 0.5) <= 1e-6, "bisection within 1e-6");
  o.require(exact && std::abs(*exact - bis) <= 1e-6, "paths agree");
  o.note(fmt2("exact=%.17g bisection=%.12g", exact.value_or(-1), bis));
  return o;
}

Outcome c3() {
  Outcome o;
  const auto t0 = Clock::now();
  for (const auto& F : {l1(), l2(), linf(), p1()}) {
    o.require(check_lemma_infty(F, 256).verdict == Verdict::kPass, "lemma-infty verdict");
  }
  const double dt = seconds_since(t0);
  o.require(dt < 1.0, "under 1 s total");
  o.note(fmt("%.3fs", dt));
  return o;
}

Outcome c4() {
  Outcome o;
  const double d = lasq2_modulus(l1(), 0.1);
  o.require(d >= 0.04 && d <= 0.1, "delta(l1, 0.1) in [0.04, 0.1]");
  o.require(throws_code([] { lasq2_modulus(linf(), 0.1); }, ErrorCode::kInfinityNormExcluded),
            "max norm refused");
  o.note(fmt("delta=%.6g; max norm refused", d));
  return o;
}

Outcome c5() {
  Outcome o;
  const auto t0 = Clock::now();
  long samples = 0;
  for (const auto& F : {l1(), l15(), l2(), linf(), p1()}) {
    const auto a = check_loh2(F, 10000);
    const auto b = check_loh3(F, 0.1, 100);
    o.require(a.verdict == Verdict::kPass && !a.counterexample, "loh2 pass");
    o.require(b.verdict == Verdict::kPass && !b.counterexample, "loh3 pass");
    samples += a.samples + b.samples;
  }
  const double dt = seconds_since(t0);
  o.require(dt < 10.0, "under 10 s total");
  o.note(fmt2("%.0f samples, %.3fs", static_cast<double>(samples), dt));
  return o;
}

Outcome c6() {
  Outcome o;
  const double r2 = std::numbers::sqrt2;
  struct Case {
    const char* name;
    FiniteSpace X;
    double lo, hi;
  };
  const Case cases[] = {{"linf(2)", linf2(), 0.98, 1.02},
                        {"l2(2)", FiniteSpace::p(2, 2), r2 - 0.02, r2 + 0.02},
                        {"l1(2)", FiniteSpace::p(1, 2), 0.98, 1.02}};
  for (const auto& c : cases) {
    const auto t0 = Clock::now();
    const ModuliReport m = s_modulus(c.X);
    const double dt = seconds_since(t0);
    o.require(m.certified && m.s->lo >= c.lo && m.s->hi <= c.hi, std::string(c.name) + " bracket");
    o.require(dt < 30.0, std::string(c.name) + " under 30 s");
    o.note(std::string(c.name) + fmt2(" [%.5f, %.5f]", m.s->lo, m.s->hi) + fmt(" (%.2fs)", dt));
  }
  const ModuliReport line = s_modulus(FiniteSpace::p(2, 1));
  o.require(line.s->lo == 0.0 && line.s->hi == 0.0, "dim 1 exactly 0");
  o.note(fmt2("dim1 [%g, %g]", line.s->lo, line.s->hi));
  return o;
}

Outcome c7() {
  Outcome o;
  double worst = std::numeric_limits<double>::infinity();
  for (int seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    const FiniteSpace X = random_polyhedral(rng, 2);
    const ModuliReport m = s_modulus(X);
    const double slack = m.s->lo - (1.0 - m.lipschitz_margin);
    worst = std::min(worst, slack);
    o.require(slack >= 0.0, "seed " + std::to_string(seed));
  }
  o.note(fmt("20 spaces, min of s_lower - (1 - margin) = %.4g", worst));
  return o;
}

Outcome c8() {
  Outcome o;
  const Interval a = *lasq_defect(linf2()).lasq_defect;
  const Interval b = *lasq_defect(FiniteSpace::p(2, 2)).lasq_defect;
  const double t = std::numbers::sqrt2 - 1.0;
  o.require(a.contains(1.0) && 1.0 - a.lo <= 0.02 && a.hi - 1.0 <= 0.02, "linf(2) brackets 1");
  o.require(b.contains(t) && t - b.lo <= 0.02 && b.hi - t <= 0.02, "l2(2) brackets sqrt2-1");
  o.note(fmt2("linf [%.5f, %.5f]", a.lo, a.hi) + fmt2(" l2 [%.5f, %.5f]", b.lo, b.hi));
  return o;
}

Outcome c9() {
  Outcome o;
  const auto t0 = Clock::now();
  AsqOptions opt;
  opt.resolution = 256;
  opt.arc_samples = 128;
  for (const auto& F : {l1(), l15(), l2(), p1()}) {
    const auto r = check_asq_impossible(linf2(), linf2(), F, opt);
    o.require(r.verdict == Verdict::kPass, "asq impossible");
    o.note(fmt("margin %.4g", r.worst_margin));
  }
  o.require(throws_code([&] { check_asq_impossible(linf2(), linf2(), linf(), opt); },
                        ErrorCode::kInfinityNormExcluded),
            "max norm refused");
  const double dt = seconds_since(t0);
  o.require(dt < 300.0, "under 5 min");
  o.note(fmt("%.1fs", dt));
  return o;
}

Outcome c10() {
  Outcome o;
  const auto t0 = Clock::now();
  PropLohOptions opt;
  opt.sum.resolution = 4096;
  opt.sum.gap = 0.1;
  const auto r = check_prop_loh(linf2(), linf2(), l2(), 0.2, opt);
  const double dt = seconds_since(t0);
  o.require(r.verdict == Verdict::kPass, "verdict pass");
  const bool global = r.parameters.contains("s_sum");
  o.require(global, "global contrapositive evaluated");
  if (global) {
    const double hi = r.parameters["s_sum"][1];
    const double delta = r.parameters["delta"];
    o.require(hi < 2.0 - delta, "s_upper(sum) < 2 - delta'");
    o.note(fmt2("s_upper(sum)=%.4f < %.4f", hi, 2.0 - delta));
  }
  o.require(dt < 600.0, "under 10 min");
  o.note(fmt2("worst margin %.4g, %.1fs", r.worst_margin, dt));
  return o;
}

Outcome c11() {
  Outcome o;
  double worst = 0.0;
  for (const auto& F : {l1(), l15(), l2(), linf(), p1()}) {
    const auto r = bidual_check(F, 256, 1e-6);
    const double dev = r.parameters["max_deviation"];
    o.require(r.verdict == Verdict::kPass && dev <= 1e-6, "bidual within 1e-6");
    worst = std::max(worst, dev);
  }
  const auto v = dual(p1()).exact_polygon();
  auto has = [&](double a, double b) {
    if (!v) return false;
    for (const Point2 q : *v)
      if (std::abs(q.a - a) <= 1e-9 && std::abs(q.b - b) <= 1e-9) return true;
    return false;
  };
  o.require(has(1.0, 2.0 / 3.0), "vertex (1, 2/3)");
  o.require(has(0.5, 1.0), "vertex (0.5, 1)");
  o.note(fmt("max bidual deviation %.3g", worst));
  return o;
}

Outcome c12() {
  Outcome o;
  const FiniteSpace X = FiniteSpace::p(1, 2);
  const Interval a = slice_diameter(X, {{1.0, 0.0}, 0.1}).value;
  const Interval b = slice_diameter(X, {{1.0, 1.0}, 0.1}).value;
  o.require(a.contains(0.2) && a.width() <= 0.02, "x*=(1,0) brackets 0.2");
  o.require(b.contains(2.0) && b.width() <= 0.02, "x*=(1,1) brackets 2");
  o.note(fmt2("(1,0): [%.5f, %.5f]", a.lo, a.hi) + fmt2(" (1,1): [%.5f, %.5f]", b.lo, b.hi));
  return o;
}

Outcome c13() {
  Outcome o;
  const BmResult r = bm_upper(FiniteSpace::p(1, 2), linf2());
  o.require(r.value <= 1.0 + 1e-6, "bm_upper <= 1 + 1e-6");
  const auto c = check_s_isometry_invariance(FiniteSpace::p(1, 2), LinearMap(2, {1, 1, 1, -1}));
  o.require(c.verdict == Verdict::kPass, "isometry invariance");
  o.note(fmt2("bm=%.12g, invariance margin %.4g", r.value, c.worst_margin));
  return o;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    out[e.path().filename().string()] = s.str();
  }
  return out;
}

Outcome c14() {
  Outcome o;
  const std::string manifest = std::string(ABSNORM_SOURCE_DIR) + "/manifests/paper-suite.json";
  const fs::path a = fs::path(ABSNORM_TEST_OUT) / "acceptance-a";
  const fs::path b = fs::path(ABSNORM_TEST_OUT) / "acceptance-b";
  fs::remove_all(a);
  fs::remove_all(b);
  const SuiteResult ra = run_suite(manifest, {a.string(), {}});
  const SuiteResult rb = run_suite(manifest, {b.string(), {}});
  const auto sa = snapshot(a), sb = snapshot(b);
  o.require(sa == sb, "byte-identical reports");
  o.require(ra.failed == 0 && rb.failed == 0, "bundled suite passes");
  o.note(std::to_string(sa.size()) + " files compared, " + std::to_string(ra.failed) +
         " failed checks");
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"r_F of l1 and lp", c1},
      {"r_F of P1, exact and bisection", c2},
      {"extreme-norm lemma grids", c3},
      {"lasq2 modulus", c4},
      {"loh2 and loh3 checks", c5},
      {"s modulus brackets", c6},
      {"Riesz invariant on random polyhedral spaces", c7},
      {"lasq defect brackets", c8},
      {"ASQ impossibility in F-sums", c9},
      {"LOH transfer with global contrapositive", c10},
      {"dual round trip and dual of P1", c11},
      {"slice diameters in l1(2)", c12},
      {"Banach-Mazur bound and s invariance", c13},
      {"deterministic bundled suite", c14},
  };
  int failed = 0;
  int k = 0;
  for (const auto& [name, run] : criteria) {
    ++k;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.ok) ++failed;
    std::printf("%s %2d %s: %s\n", o.ok ? "PASS" : "FAIL", k, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", k - failed, k);
  return failed;
}

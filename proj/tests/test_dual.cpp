#include <doctest.h>

#include <cmath>

#include "absnorm/dual.hpp"
#include "absnorm/geometry.hpp"
#include "test_support.hpp"

using namespace absnorm;
using namespace absnorm::testing;

TEST_CASE("dual examples") {
  const auto d1 = dual(l1());
  const auto d2 = dual(l2());
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double a = i / 9.0;
      const double b = j / 9.0;
      CHECK(std::abs(d1(a, b) - std::max(a, b)) <= 1e-8);
      CHECK(std::abs(d2(a, b) - std::hypot(a, b)) <= 1e-8);
    }
  }
  // Edge functionals of P1: alpha.(1,0) = alpha.(0.5,0.75) = 1 -> (1, 2/3);
  // alpha.(0.5,0.75) = alpha.(0,1) = 1 -> (0.5, 1).
  const auto dp = dual(p1());
  const auto& v = dp.vertices();
  REQUIRE(v.size() == 4);
  CHECK(std::abs(v[1].a - 1.0) <= 1e-9);
  CHECK(std::abs(v[1].b - 2.0 / 3.0) <= 1e-9);
  CHECK(std::abs(v[2].a - 0.5) <= 1e-9);
  CHECK(std::abs(v[2].b - 1.0) <= 1e-9);
  // Conjugate exponent oracle: (l^1.5)* = l^3.
  const auto d15 = dual(l15());
  for (int k = 0; k <= 20; ++k) {
    const double a = k / 20.0;
    const double b = 1.0 - a / 3.0;
    CHECK(std::abs(d15(a, b) - l3()(a, b)) <= 1e-8);
  }
}

TEST_CASE("dual properties") {
  for (const auto& norm : zoo()) {
    const auto star = dual(norm, 512);
    CHECK(std::abs(star(1.0, 0.0) - 1.0) <= 1e-9);
    CHECK(std::abs(star(0.0, 1.0) - 1.0) <= 1e-9);
    CHECK(norm(1.0, 1.0) * star(1.0, 1.0) >= 2.0 - 1e-9);
  }
  CHECK(l2()(1, 1) * dual(l2())(1, 1) == doctest::Approx(2.0));
  // l2 <= l1 pointwise, so l1* <= l2*.
  const auto s1 = dual(l1(), 512);
  const auto s2 = dual(l2(), 512);
  for (int i = 0; i <= 10; ++i) {
    for (int j = 0; j <= 10; ++j) {
      CHECK(s1(i / 10.0, j / 10.0) <= s2(i / 10.0, j / 10.0) + 1e-9);
    }
  }
}

TEST_CASE("bidual_check") {
  for (const auto& norm : {l1(), l15(), l2(), linf(), p1()}) {
    const auto report = bidual_check(norm, 256, 1e-6);
    CHECK(report.verdict == Verdict::kPass);
    CHECK(report.parameters["max_deviation"].get<double>() <= 1e-6);
  }
  // Exact polarity applied twice returns the original vertices.
  const auto back = dual(dual(p1()));
  const auto& v = back.vertices();
  REQUIRE(v.size() == 3);
  CHECK(std::abs(v[1].a - 0.5) <= 1e-12);
  CHECK(std::abs(v[1].b - 0.75) <= 1e-12);
}

TEST_CASE("duality_chain_check") {
  const auto r2 = duality_chain_check(l2());
  CHECK(r2.verdict == Verdict::kPass);
  CHECK_FALSE(smooth_at(l1(), {1.0, 0.0}));
  CHECK(smooth_at(l15(), {1.0, 0.0}));
  const auto r1 = duality_chain_check(l1());
  CHECK(r1.verdict == Verdict::kVacuous);
  const auto rp = duality_chain_check(p1());
  CHECK(rp.verdict == Verdict::kVacuous);
}

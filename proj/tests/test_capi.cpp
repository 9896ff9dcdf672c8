// Exercises the shared library through absnorm.h only.
#include <doctest.h>

#include <cmath>
#include <string>

#include "absnorm/absnorm.h"

namespace {

const std::string kData = ABSNORM_TEST_DATA;
const std::string kOut = ABSNORM_TEST_OUT;

std::string take(absnorm_text* t) {
  std::string s(absnorm_text_data(t), absnorm_text_size(t));
  absnorm_text_free(t);
  return s;
}

}  // namespace

TEST_CASE("norm handles") {
  absnorm_norm* l2 = nullptr;
  REQUIRE(absnorm_norm_p(2.0, &l2) == ABSNORM_OK);
  double v = 0;
  CHECK(absnorm_norm_eval(l2, 3, 4, &v) == ABSNORM_OK);
  CHECK(v == doctest::Approx(5.0));
  CHECK(absnorm_boundary(l2, 0.6, 0, &v) == ABSNORM_OK);
  CHECK(v == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(absnorm_r(l2, 0, &v) == ABSNORM_OK);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-6));

  absnorm_norm* d = nullptr;
  CHECK(absnorm_dual(l2, 0, &d) == ABSNORM_OK);
  CHECK(absnorm_norm_eval(d, 0.6, 0.8, &v) == ABSNORM_OK);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
  absnorm_norm_free(d);

  absnorm_text* csv = nullptr;
  CHECK(absnorm_curve_csv(l2, 2, &csv) == ABSNORM_OK);
  CHECK(take(csv) == "t,f\n0,1\n0.5,0.866025403784\n1,0\n");
  absnorm_norm_free(l2);

  const double vertices[] = {1, 0, 0.5, 0.75, 0, 1};
  absnorm_norm* p1 = nullptr;
  REQUIRE(absnorm_norm_polygon(vertices, 3, &p1) == ABSNORM_OK);
  CHECK(absnorm_r(p1, 0, &v) == ABSNORM_OK);
  CHECK(v == 0.5);
  absnorm_text* spec = nullptr;
  CHECK(absnorm_norm_spec(p1, &spec) == ABSNORM_OK);
  CHECK(take(spec).find("polygon") != std::string::npos);
  absnorm_norm_free(p1);

  absnorm_norm* inf = nullptr;
  REQUIRE(absnorm_norm_p(INFINITY, &inf) == ABSNORM_OK);
  CHECK(absnorm_lasq2_modulus(inf, 0.1, &v) == ABSNORM_E_INFINITY_NORM_EXCLUDED);
  CHECK(std::string(absnorm_last_error()).size() > 0);
  absnorm_norm_free(inf);
}

TEST_CASE("status codes") {
  absnorm_norm* n = nullptr;
  CHECK(absnorm_norm_parse("{\"type\":\"p\",\"p\":0.5}", &n) == ABSNORM_E_PARSE);
  CHECK(n == nullptr);
  CHECK(std::string(absnorm_last_error()).find("'p'") != std::string::npos);
  CHECK(absnorm_norm_parse("{", &n) == ABSNORM_E_PARSE);
  CHECK(absnorm_norm_load((kData + "/broken_polygon.json").c_str(), &n) ==
        ABSNORM_E_INVALID_NORM);
  CHECK(absnorm_norm_load((kData + "/nope.json").c_str(), &n) == ABSNORM_E_IO);
  CHECK(absnorm_norm_p(2.0, nullptr) == ABSNORM_E_INVALID_ARGUMENT);
  CHECK(std::string(absnorm_status_name(ABSNORM_E_SINGULAR_MATRIX)) == "SingularMatrix");
  CHECK(std::string(absnorm_status_name(ABSNORM_OK)) == "Ok");

  const double singular[] = {1, 2, 2, 4};
  absnorm_map* m = nullptr;
  CHECK(absnorm_map_create(2, singular, &m) == ABSNORM_E_SINGULAR_MATRIX);

  absnorm_space* x = nullptr;
  REQUIRE(absnorm_space_p(2, 2, &x) == ABSNORM_OK);
  const double v3[] = {1, 2, 3};
  double out = 0;
  CHECK(absnorm_space_norm(x, v3, 3, &out) == ABSNORM_E_DIMENSION_MISMATCH);
  CHECK(absnorm_space_norm(x, v3, 2, &out) == ABSNORM_OK);
  CHECK(out == doctest::Approx(std::sqrt(5.0)));
  absnorm_space_free(x);
  CHECK(std::string(absnorm_version()).size() > 0);
}

TEST_CASE("spaces, moduli and maps") {
  absnorm_space *l1 = nullptr, *linf = nullptr, *l2 = nullptr;
  REQUIRE(absnorm_space_p(1, 2, &l1) == ABSNORM_OK);
  REQUIRE(absnorm_space_parse("{\"type\":\"p\",\"p\":\"inf\",\"dim\":2}", &linf) == ABSNORM_OK);
  REQUIRE(absnorm_space_load((kData + "/../../specs/l2_2d.json").c_str(), &l2) == ABSNORM_OK);
  CHECK(absnorm_space_dim(l2) == 2);

  absnorm_interval s{};
  double margin = -1;
  CHECK(absnorm_s_modulus(l2, 0, 0, &s, &margin) == ABSNORM_OK);
  CHECK(s.lo <= std::sqrt(2.0));
  CHECK(s.hi >= std::sqrt(2.0));
  CHECK(s.hi - s.lo < 0.04);
  CHECK(margin >= 0);
  CHECK(absnorm_lasq_defect(linf, 0, 0, &s, nullptr) == ABSNORM_OK);
  CHECK(s.lo <= 1.0);
  CHECK(s.hi >= 1.0);

  const double T[] = {1, 1, 1, -1};
  absnorm_map* m = nullptr;
  REQUIRE(absnorm_map_create(2, T, &m) == ABSNORM_OK);
  absnorm_interval op{};
  CHECK(absnorm_operator_norm(m, l1, linf, 0, &op) == ABSNORM_OK);
  CHECK(op.lo <= 1.0 + 1e-12);
  CHECK(op.hi >= 1.0 - 1e-12);
  CHECK(op.hi - op.lo < 1e-6);
  absnorm_map_free(m);

  double bm = 0;
  double best[4];
  CHECK(absnorm_bm_upper(l1, linf, 0, 0, &bm, best) == ABSNORM_OK);
  CHECK(bm <= 1.0 + 1e-6);
  CHECK(bm >= 1.0 - 1e-9);

  absnorm_norm* F = nullptr;
  REQUIRE(absnorm_norm_p(2, &F) == ABSNORM_OK);
  absnorm_space* sum = nullptr;
  CHECK(absnorm_space_sum(l1, linf, F, &sum) == ABSNORM_OK);
  CHECK(absnorm_space_dim(sum) == 4);
  const double x[] = {0.5, 0.5, 0, 1};
  double v = 0;
  CHECK(absnorm_space_norm(sum, x, 4, &v) == ABSNORM_OK);
  CHECK(v == doctest::Approx(std::sqrt(2.0)));
  absnorm_space_free(sum);
  absnorm_norm_free(F);

  absnorm_space* big = nullptr;
  REQUIRE(absnorm_space_p(2, 5, &big) == ABSNORM_OK);
  CHECK(absnorm_s_modulus(big, 2000, 0.5, &s, nullptr) == ABSNORM_E_CERTIFICATION_UNAVAILABLE);
  CHECK(s.lo == 0.0);
  absnorm_space_free(big);

  absnorm_space_free(l1);
  absnorm_space_free(linf);
  absnorm_space_free(l2);
}

TEST_CASE("requests and suites") {
  absnorm_text* report = nullptr;
  const char* request =
      R"({"verb":"check","claim":"lemma-loh2","inputs":{"F":"l1.json"},"parameters":{"samples":400}})";
  REQUIRE(absnorm_execute(request, (kData + "/../../specs").c_str(), &report) == ABSNORM_OK);
  const std::string text = take(report);
  CHECK(text.find("\"status\": \"pass\"") != std::string::npos);

  CHECK(absnorm_execute("{\"verb\":", nullptr, &report) == ABSNORM_E_PARSE);
  CHECK(absnorm_execute(R"({"verb":"r","inputs":{"norm":"missing.json"}})", nullptr, &report) ==
        ABSNORM_E_IO);

  absnorm_text* summary = nullptr;
  int failed = -1;
  CHECK(absnorm_suite_run((kData + "/missing_manifest.json").c_str(),
                          (kOut + "/capi-missing").c_str(), nullptr, &summary,
                          &failed) == ABSNORM_E_IO);
  CHECK(failed == -1);
  CHECK(absnorm_suite_run((kData + "/broken_manifest.json").c_str(),
                          (kOut + "/capi-broken").c_str(), nullptr, &summary,
                          &failed) == ABSNORM_OK);
  CHECK(failed == 1);
  CHECK(take(summary).find("InvalidNorm") != std::string::npos);
}

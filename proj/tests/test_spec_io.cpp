#include <doctest.h>

#include <cmath>
#include <string>

#include "absnorm/errors.hpp"
#include "absnorm/spec_io.hpp"
#include "test_support.hpp"

using namespace absnorm;
using namespace absnorm::testing;
using nlohmann::json;

namespace {

// The error must carry the code and name the offending field.
template <class Fn>
void expect_error(Fn fn, ErrorCode code, const std::string& needle) {
  try {
    fn();
    FAIL("expected an error mentioning " << needle);
  } catch (const Error& e) {
    CHECK(e.code() == code);
    CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
  }
}

const std::string kData = ABSNORM_TEST_DATA;

}  // namespace

TEST_CASE("norm specs parse to the expected norms") {
  CHECK(parse_norm_spec(json::parse(R"({"type":"p","p":2})"))(3, 4) == doctest::Approx(5));
  CHECK(parse_norm_spec(json::parse(R"({"type":"p","p":"inf"})")).is_max_norm());
  CHECK(parse_norm_spec(json::parse(R"({"type":"p","p":"infinity"})")).is_max_norm());
  const auto P = parse_norm_spec(
      json::parse(R"({"type":"polygon","vertices":[[1,0],[0.5,0.75],[0,1]]})"));
  CHECK(P(0.5, 0.75) == doctest::Approx(1.0));
  const auto S = parse_norm_spec(json::parse(
      R"({"type":"swap","inner":{"type":"polygon","vertices":[[1,0],[0.5,0.75],[0,1]]}})"));
  CHECK(S(0.75, 0.5) == doctest::Approx(1.0));
  const auto D = parse_norm_spec(json::parse(R"({"type":"dual","inner":{"type":"p","p":3}})"));
  // dual of l^3 is l^{3/2}
  CHECK(D(0.6, 0.8) == doctest::Approx(std::pow(std::pow(0.6, 1.5) + std::pow(0.8, 1.5), 1 / 1.5)).epsilon(1e-9));
}

TEST_CASE("norm specs round trip") {
  for (const auto& F : zoo()) {
    const json spec = to_spec(F);
    const auto G = parse_norm_spec(json::parse(spec.dump()));
    for (double t = 0.0; t < 1.6; t += 0.1) {
      CHECK(G(std::cos(t), std::sin(t)) == doctest::Approx(F(std::cos(t), std::sin(t))).epsilon(1e-12));
    }
  }
}

TEST_CASE("space specs round trip") {
  const std::vector<json> specs = {
      json::parse(R"({"type":"p","p":1.5,"dim":3})"),
      json::parse(R"({"type":"polyhedral","functionals":[[1,0],[0.5,0.8],[-0.5,0.8]]})"),
      json::parse(R"({"type":"fsum","left":{"type":"p","p":"inf","dim":2},
                      "right":{"type":"p","p":1,"dim":1},"F":{"type":"p","p":2}})"),
      json::parse(R"({"type":"mapped","inner":{"type":"p","p":1,"dim":2},
                      "matrix":[[1,1],[1,-1]]})"),
  };
  for (const auto& spec : specs) {
    const auto X = parse_space_spec(spec);
    const auto Y = parse_space_spec(json::parse(to_spec(X).dump()));
    REQUIRE(X.dim() == Y.dim());
    Vector x(X.dim());
    for (int i = 0; i < X.dim(); ++i) x[i] = 0.3 * (i + 1) - 0.7;
    CHECK(Y.norm(x) == doctest::Approx(X.norm(x)).epsilon(1e-12));
  }
  // forward matrix: pushforward of l^1 by the rotation-dilation is l^inf
  const auto M = parse_space_spec(specs[3]);
  CHECK(M.norm(Vector{1.0, 1.0}) == doctest::Approx(1.0));
  CHECK(M.norm(Vector{2.0, 0.0}) == doctest::Approx(2.0));
}

TEST_CASE("parse errors name the field") {
  auto norm = [](const char* text) { return [=] { parse_norm_spec(json::parse(text)); }; };
  auto space = [](const char* text) { return [=] { parse_space_spec(json::parse(text)); }; };
  expect_error(norm(R"({"p":2})"), ErrorCode::kParse, "'type'");
  expect_error(norm(R"({"type":"q"})"), ErrorCode::kParse, "'type'");
  expect_error(norm(R"({"type":"p","p":0.5})"), ErrorCode::kParse, "'p'");
  expect_error(norm(R"({"type":"p","p":"big"})"), ErrorCode::kParse, "'p'");
  expect_error(norm(R"({"type":"polygon","vertices":[[1,0],[0.5,"x"],[0,1]]})"),
               ErrorCode::kParse, "'vertices[1][1]'");
  expect_error(norm(R"({"type":"polygon","vertices":[[1,0],[0.5],[0,1]]})"),
               ErrorCode::kParse, "'vertices[1]'");
  expect_error(norm(R"({"type":"swap","inner":{"type":"p"}})"), ErrorCode::kParse,
               "'inner.p'");
  // broken polygon: structurally fine, rejected by validation
  expect_error(norm(R"({"type":"polygon","vertices":[[1,0],[0.9,0.2],[0.5,0.3],[0,1]]})"),
               ErrorCode::kInvalidNorm, "'vertices'");
  expect_error(space(R"({"type":"p","p":2})"), ErrorCode::kParse, "'dim'");
  expect_error(space(R"({"type":"fsum","left":{"type":"p","p":2,"dim":1},
                         "right":{"type":"p","p":2,"dim":1}})"),
               ErrorCode::kParse, "'F'");
  expect_error(space(R"({"type":"fsum","left":{"type":"p","p":-1,"dim":1},
                         "right":{"type":"p","p":2,"dim":1},"F":{"type":"p","p":1}})"),
               ErrorCode::kParse, "'left.p'");
  expect_error(space(R"({"type":"polyhedral","functionals":[[1,0],[2,0]]})"),
               ErrorCode::kInvalidNorm, "'functionals'");
  expect_error(space(R"({"type":"mapped","inner":{"type":"p","p":1,"dim":2},
                         "matrix":[[1,1],[1,1]]})"),
               ErrorCode::kSingularMatrix, "'matrix'");
}

TEST_CASE("spec files") {
  CHECK(load_norm_spec(kData + "/../../specs/p1.json")(0.5, 0.75) == doctest::Approx(1.0));
  CHECK(load_space_spec(kData + "/../../specs/linf_2d.json").dim() == 2);
  expect_error([] { read_json_file(kData + "/nope.json"); }, ErrorCode::kIo, "nope.json");
  // syntax errors report the position
  expect_error([] { read_json_file(kData + "/truncated.json"); }, ErrorCode::kParse, "line");
  expect_error([] { load_norm_spec(kData + "/bad_field.json"); }, ErrorCode::kParse,
               "'vertices[1][1]'");
}

TEST_CASE("fnv1a reference values") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

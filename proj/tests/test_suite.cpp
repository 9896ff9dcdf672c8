#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "absnorm/commands.hpp"
#include "absnorm/errors.hpp"
#include "absnorm/suite.hpp"

using namespace absnorm;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kData = ABSNORM_TEST_DATA;
const fs::path kOut = fs::path(ABSNORM_TEST_OUT) / "suite";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    out[e.path().filename().string()] = slurp(e.path());
  }
  return out;
}

}  // namespace

TEST_CASE("missing input fails before anything runs") {
  const fs::path out = kOut / "missing";
  fs::remove_all(out);
  try {
    run_suite(kData + "/missing_manifest.json", {out.string(), {}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIo);
    CHECK(std::string(e.what()).find("commands[1].inputs") != std::string::npos);
  }
  // not even the output directory was created
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("manifest errors are reported with their field") {
  const fs::path dir = kOut / "manifests";
  fs::create_directories(dir);
  auto expect = [&](const std::string& text, ErrorCode code, const std::string& needle) {
    const fs::path m = dir / "m.json";
    std::ofstream(m) << text;
    try {
      run_suite(m.string(), {(dir / "out").string(), {}});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == code);
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
    }
  };
  expect("{\"commands\": [", ErrorCode::kParse, "line");
  expect(R"({"name": "x"})", ErrorCode::kParse, "'commands'");
  expect(R"({"commands": [{"verb": "fly"}]})", ErrorCode::kParse, "'commands[0].verb'");
  expect(R"({"commands": [{"verb": "check"}]})", ErrorCode::kParse, "'commands[0].claim'");
  expect(R"({"commands": [{"id": "a", "verb": "r", "inputs": {"norm": {"type": "p", "p": 2}}},
                          {"id": "a", "verb": "r", "inputs": {"norm": {"type": "p", "p": 2}}}]})",
         ErrorCode::kParse, "duplicate");
  CHECK_THROWS_AS(run_suite((dir / "absent.json").string()), Error);
}

TEST_CASE("a broken polygon is recorded and the rest still runs") {
  const fs::path out = kOut / "broken";
  fs::remove_all(out);
  const SuiteResult r = run_suite(kData + "/broken_manifest.json", {out.string(), {}});
  CHECK(r.failed == 1);
  CHECK(r.exit_status() != 0);
  const auto& checks = r.summary["checks"];
  REQUIRE(checks.size() == 4);
  CHECK(checks[0]["status"] == "pass");
  CHECK(checks[1]["status"] == "error");
  CHECK(checks[1]["error"]["code"] == "InvalidNorm");
  CHECK(checks[2]["status"] == "pass");
  CHECK(checks[3]["status"] == "ok");
  const json broken = json::parse(slurp(out / "broken.json"));
  CHECK(broken["error"]["message"].get<std::string>().find("convex") != std::string::npos);
  CHECK(r.summary["counts"]["error"] == 1);
}

TEST_CASE("reports are complete, atomic and deterministic") {
  const fs::path a = kOut / "small-a", b = kOut / "small-b";
  fs::remove_all(a);
  fs::remove_all(b);
  const SuiteResult ra = run_suite(kData + "/small_manifest.json", {a.string(), {}});
  const SuiteResult rb = run_suite(kData + "/small_manifest.json", {b.string(), {}});
  CHECK(ra.exit_status() == 0);
  CHECK(ra.summary["counts"]["vacuous"] == 1);
  CHECK(ra.summary["checks"][2]["annotation"].get<std::string>().find("counted as pass") !=
        std::string::npos);

  const auto sa = snapshot(a), sb = snapshot(b);
  CHECK(sa.size() == 6);  // five reports and the summary
  CHECK(sa == sb);
  for (const auto& [name, text] : sa) {
    CHECK(name.find(".tmp") == std::string::npos);
    const json report = json::parse(text);
    CHECK(report["tool"]["version"] == version());
    if (name == "summary.json") {
      CHECK(report["manifest"]["hash"].get<std::string>().size() == 16);
      continue;
    }
    CHECK(report.contains("parameters"));
    CHECK(report["tolerances"]["tol"] == 1e-3);
    for (const auto& [_, input] : report["inputs"].items()) {
      CHECK(input["hash"].get<std::string>().size() == 16);
    }
  }
  // global tolerance reaches non-check verbs, and can be overridden
  const json s = json::parse(sa.at("s-l2.json"));
  CHECK(s["parameters"]["tol"] == 1e-3);
  CHECK(s["parameters"]["resolution"] == 512);
  const fs::path c = kOut / "small-c";
  const SuiteResult rc = run_suite(kData + "/small_manifest.json", {c.string(), 1e-2});
  CHECK(rc.summary["tolerances"]["tol"] == 1e-2);
  CHECK(json::parse(slurp(c / "loh2-l2.json"))["parameters"].count("tol") == 0);
}

TEST_CASE("execute records computation errors in the report") {
  const json ok = execute({{"verb", "r"}, {"inputs", {{"norm", {{"type", "p"}, {"p", 1}}}}}});
  CHECK(report_status(ok) == "ok");
  CHECK(ok["result"]["rF"] == 0.0);

  const json excluded = execute({{"verb", "check"},
                                 {"claim", "prop-lasq-iii"},
                                 {"inputs",
                                  {{"X", {{"type", "p"}, {"p", "inf"}, {"dim", 2}}},
                                   {"Y", {{"type", "p"}, {"p", "inf"}, {"dim", 2}}},
                                   {"F", {{"type", "p"}, {"p", "inf"}}}}}});
  CHECK(report_status(excluded) == "error");
  CHECK(excluded["error"]["code"] == "InfinityNormExcluded");

  const json unknown = execute({{"verb", "check"}, {"claim", "no-such-claim"}});
  CHECK(unknown["error"]["code"] == "InvalidArgument");

  CHECK_THROWS_AS(execute({{"verb", "sum-check"}, {"claim", "lemma-loh2"}}), Error);
  CHECK_THROWS_AS(execute({{"claim", "x"}}), Error);

  const json ignored = execute({{"verb", "r"},
                                {"inputs", {{"norm", {{"type", "p"}, {"p", 2}}}}},
                                {"parameters", {{"bogus", 1}}}});
  CHECK(ignored["ignored_parameters"] == json::array({"bogus"}));
}

TEST_CASE("curve csv") {
  const std::string l2 = curve_csv(AbsoluteNorm::p(2), 4);
  CHECK(l2 ==
        "t,f\n0,1\n0.25,0.968245836552\n0.5,0.866025403784\n0.75,0.661437827766\n1,0\n");
  CHECK(curve_csv(AbsoluteNorm::infinity(), 2) == "t,f\n0,1\n0.5,1\n1,1\n");
  const auto P1 = AbsoluteNorm::polygonal({{1.0, 0.0}, {0.5, 0.75}, {0.0, 1.0}});
  CHECK(curve_csv(P1, 2) == "t,f\n0,1\n0.5,0.75\n1,0\n");
  CHECK_THROWS_AS(curve_csv(P1, 1), Error);
}

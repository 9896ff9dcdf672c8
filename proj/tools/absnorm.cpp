// absnorm command-line front end. Talks to the library through the C
// interface only.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "absnorm/absnorm.h"

using nlohmann::json;

namespace {

// Exit codes: 0 pass/ok/vacuous, 1 a check failed or errored, 2 bad input.
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

struct Text {
  absnorm_text* ptr = nullptr;
  ~Text() { absnorm_text_free(ptr); }
  std::string str() const { return {absnorm_text_data(ptr), absnorm_text_size(ptr)}; }
};

int report_error(absnorm_status st) {
  std::cerr << "absnorm: " << absnorm_status_name(st) << ": " << absnorm_last_error() << "\n";
  return kExitInput;
}

bool emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return true;
  }
  const std::string tmp = out + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!(f << text)) return false;
  }
  return std::rename(tmp.c_str(), out.c_str()) == 0;
}

// key=value; the value is read as JSON when it parses, as a string otherwise.
json parse_params(const std::vector<std::string>& items) {
  json out = json::object();
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw CLI::ValidationError("--param", "expected key=value, got '" + item + "'");
    }
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    try {
      out[key] = json::parse(value);
    } catch (const json::parse_error&) {
      out[key] = value;
    }
  }
  return out;
}

struct Common {
  double tol = 0.0;
  long resolution = 0;
  std::string out;
  std::vector<std::string> params;
};

void add_common(CLI::App* cmd, Common& c, bool with_tol = true, bool with_res = true) {
  if (with_tol) cmd->add_option("--tol", c.tol, "tolerance (bisection tol or bracket gap)");
  if (with_res) cmd->add_option("--resolution", c.resolution, "sampling resolution");
  cmd->add_option("--out", c.out, "write the result here instead of stdout");
  cmd->add_option("--param", c.params, "extra parameter key=value (repeatable)");
}

int run_request(json request, const Common& c) {
  json& p = request["parameters"];
  if (c.tol > 0) p["tol"] = c.tol;
  if (c.resolution > 0) p["resolution"] = c.resolution;
  const json extra = parse_params(c.params);
  for (const auto& [k, v] : extra.items()) p[k] = v;

  Text report;
  const absnorm_status st = absnorm_execute(request.dump().c_str(), ".", &report.ptr);
  if (st != ABSNORM_OK) return report_error(st);
  if (!emit(report.str(), c.out)) {
    std::cerr << "absnorm: cannot write " << c.out << "\n";
    return kExitInput;
  }
  const json parsed = json::parse(report.str());
  const std::string status = parsed.value("status", "error");
  if (status == "error") {
    const std::string code = parsed["error"]["code"];
    std::cerr << "absnorm: " << code << ": " << parsed["error"]["message"].get<std::string>()
              << "\n";
    return code == "ParseError" || code == "IoError" ? kExitInput : kExitFail;
  }
  return status == "fail" ? kExitFail : 0;
}

json numbers(const std::vector<double>& v) { return json(v); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"absnorm: invariants of absolute normalised norms and finite-dimensional spaces"};
  app.set_version_flag("--version", std::string(absnorm_version()));
  app.require_subcommand(1);

  Common common;
  std::string norm_path, space_path, x_path, y_path, f_path, claim;
  int n = 100;
  std::string what = "s";
  std::vector<double> point, functional, map;
  double eps = 0.1;
  int restarts = 64;
  std::string manifest;

  auto* profile = app.add_subcommand("profile", "structural profile of a norm on R^2");
  profile->add_option("norm", norm_path, "norm spec file")->required();
  add_common(profile, common);

  auto* curve = app.add_subcommand("curve", "CSV of the upper boundary curve t,f(t)");
  curve->add_option("norm", norm_path, "norm spec file")->required();
  curve->add_option("-n", n, "number of intervals (n+1 rows)")->check(CLI::Range(2, 100000000));
  curve->add_option("--out", common.out, "write the CSV here instead of stdout");

  auto* dual = app.add_subcommand("dual", "dual norm and bidual round trip");
  dual->add_option("norm", norm_path, "norm spec file")->required();
  add_common(dual, common);

  auto* r = app.add_subcommand("r", "the octahedrality parameter r_F");
  r->add_option("norm", norm_path, "norm spec file")->required();
  add_common(r, common, true, false);

  auto* moduli = app.add_subcommand("moduli", "certified s(X), LASQ defect or m(x)");
  moduli->add_option("space", space_path, "space spec file")->required();
  moduli->add_option("--what", what, "s, lasq, both or m")
      ->check(CLI::IsMember({"s", "lasq", "both", "m"}));
  moduli->add_option("--x", point, "unit vector for --what m")->delimiter(',');
  add_common(moduli, common);

  auto* slice = app.add_subcommand("slice", "certified diameter of a slice of the unit ball");
  slice->add_option("space", space_path, "space spec file")->required();
  slice->add_option("--functional", functional, "norm-one functional, comma separated")
      ->delimiter(',')
      ->required();
  slice->add_option("--eps", eps, "slice depth");
  add_common(slice, common);

  auto* sum = app.add_subcommand("sum-check", "check a direct-sum claim on X (+)_F Y");
  sum->add_option("claim", claim, "prop-loh, prop-lasq-i, prop-lasq-ii or prop-lasq-iii")
      ->required();
  sum->add_option("--X", x_path, "space spec file")->required();
  sum->add_option("--Y", y_path, "space spec file")->required();
  sum->add_option("--F", f_path, "norm spec file")->required();
  add_common(sum, common, false, true);

  auto* check = app.add_subcommand("check", "check any claim (inputs as name=path)");
  std::vector<std::string> inputs;
  check->add_option("claim", claim, "claim id")->required();
  check->add_option("--input", inputs, "input name=path (repeatable)");
  add_common(check, common, false, true);

  auto* bm = app.add_subcommand("bm", "Banach-Mazur distance upper bound");
  bm->add_option("X", x_path, "space spec file")->required();
  bm->add_option("Y", y_path, "space spec file")->required();
  bm->add_option("--map", map, "row-major matrix to evaluate instead of searching")
      ->delimiter(',');
  bm->add_option("--restarts", restarts, "number of starts");
  add_common(bm, common, false, true);

  auto* suite = app.add_subcommand("suite", "run a manifest of checks");
  suite->add_option("--manifest", manifest, "manifest file")->required();
  suite->add_option("--out", common.out, "report directory (overrides the manifest)");
  suite->add_option("--tol", common.tol, "global tolerance (overrides the manifest)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInput;
  }

  try {
    if (curve->parsed()) {
      absnorm_norm* norm = nullptr;
      absnorm_status st = absnorm_norm_load(norm_path.c_str(), &norm);
      if (st != ABSNORM_OK) return report_error(st);
      Text csv;
      st = absnorm_curve_csv(norm, n, &csv.ptr);
      absnorm_norm_free(norm);
      if (st != ABSNORM_OK) return report_error(st);
      if (!emit(csv.str(), common.out)) return kExitInput;
      return 0;
    }
    if (suite->parsed()) {
      Text summary;
      int failed = 0;
      const double tol = common.tol;
      const absnorm_status st =
          absnorm_suite_run(manifest.c_str(), common.out.empty() ? nullptr : common.out.c_str(),
                            tol > 0 ? &tol : nullptr, &summary.ptr, &failed);
      if (st != ABSNORM_OK) return report_error(st);
      const json s = json::parse(summary.str());
      for (const auto& c : s["checks"]) {
        std::cout << c["status"].get<std::string>() << "  " << c["id"].get<std::string>() << "\n";
      }
      std::cout << failed << " failed of " << s["checks"].size() << "\n";
      return failed == 0 ? 0 : kExitFail;
    }

    json request = {{"parameters", json::object()}};
    json& p = request["parameters"];
    if (profile->parsed() || dual->parsed() || r->parsed()) {
      request["verb"] = profile->parsed() ? "profile" : dual->parsed() ? "dual" : "r";
      request["inputs"] = {{"norm", norm_path}};
    } else if (moduli->parsed()) {
      request["verb"] = "moduli";
      request["inputs"] = {{"space", space_path}};
      p["what"] = what;
      if (!point.empty()) p["x"] = numbers(point);
      if (common.tol > 0) p["gap"] = common.tol;
    } else if (slice->parsed()) {
      request["verb"] = "slice";
      request["inputs"] = {{"space", space_path}};
      p["functional"] = numbers(functional);
      p["eps"] = eps;
      if (common.tol > 0) p["gap"] = common.tol;
    } else if (sum->parsed()) {
      request["verb"] = "sum-check";
      request["claim"] = claim;
      request["inputs"] = {{"X", x_path}, {"Y", y_path}, {"F", f_path}};
    } else if (check->parsed()) {
      request["verb"] = "check";
      request["claim"] = claim;
      request["inputs"] = json::object();
      for (const auto& item : inputs) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
          std::cerr << "absnorm: --input expects name=path\n";
          return kExitInput;
        }
        request["inputs"][item.substr(0, eq)] = item.substr(eq + 1);
      }
    } else if (bm->parsed()) {
      request["verb"] = "bm";
      request["inputs"] = {{"X", x_path}, {"Y", y_path}};
      if (!map.empty()) p["map"] = numbers(map);
      else p["restarts"] = restarts;
    }
    Common c = common;
    if (moduli->parsed() || slice->parsed()) c.tol = 0;  // already mapped to gap
    return run_request(std::move(request), c);
  } catch (const CLI::Error& e) {
    std::cerr << "absnorm: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "absnorm: " << e.what() << "\n";
    return kExitInput;
  }
}

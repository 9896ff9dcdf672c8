#include "absnorm/suite.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "absnorm/commands.hpp"
#include "absnorm/errors.hpp"
#include "absnorm/spec_io.hpp"

namespace absnorm {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::set<std::string> kVerbs = {"profile", "curve", "dual", "r",  "moduli",
                                      "slice",   "sum-check", "bm", "check"};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open manifest " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_atomically(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::string safe_name(const std::string& id) {
  std::string out;
  for (char c : id) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out;
}

struct Planned {
  std::string id;
  json request;
};

}  // namespace

SuiteResult run_suite(const std::string& manifest_path, const SuiteOptions& options) {
  const fs::path mpath(manifest_path);
  const std::string bytes = slurp(mpath);
  json manifest;
  try {
    manifest = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, manifest_path + ": " + e.what());
  }
  const fs::path base = mpath.parent_path().empty() ? fs::path(".") : mpath.parent_path();
  auto where = [&](const std::string& field) {
    return manifest_path + ": field '" + field + "'";
  };
  if (!manifest.is_object() || !manifest.contains("commands") ||
      !manifest["commands"].is_array()) {
    throw Error(ErrorCode::kParse, where("commands") + ": expected an array");
  }

  json tolerances = manifest.value("tolerances", json::object());
  if (!tolerances.is_object()) {
    throw Error(ErrorCode::kParse, where("tolerances") + ": expected an object");
  }
  if (options.tol) tolerances["tol"] = *options.tol;

  // Everything below up to the run loop is validation only.
  std::vector<Planned> plan;
  std::set<std::string> ids;
  const json& commands = manifest["commands"];
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const json& c = commands[i];
    const std::string at = "commands[" + std::to_string(i) + "]";
    if (!c.is_object()) throw Error(ErrorCode::kParse, where(at) + ": expected an object");
    if (!c.contains("verb") || !c["verb"].is_string() || !kVerbs.contains(c["verb"])) {
      throw Error(ErrorCode::kParse, where(at + ".verb") + ": missing or unknown");
    }
    const std::string verb = c["verb"];
    const bool check = verb == "check" || verb == "sum-check";
    if (check && (!c.contains("claim") || !c["claim"].is_string())) {
      throw Error(ErrorCode::kParse, where(at + ".claim") + ": missing");
    }
    std::string id = c.value("id", std::to_string(i) + "-" + verb +
                                       (check ? "-" + c["claim"].get<std::string>() : ""));
    id = safe_name(id);
    if (!ids.insert(id).second) {
      throw Error(ErrorCode::kParse, where(at + ".id") + ": duplicate '" + id + "'");
    }
    json inputs = c.value("inputs", json::object());
    try {
      load_inputs(inputs, base.string());
    } catch (const Error& e) {
      throw Error(e.code(), where(at + ".inputs") + ": " + e.what());
    }
    json params = c.value("parameters", json::object());
    if (!params.is_object()) {
      throw Error(ErrorCode::kParse, where(at + ".parameters") + ": expected an object");
    }
    if (!check) {
      for (const auto& [key, value] : tolerances.items())
        if (!params.contains(key)) params[key] = value;
    }
    json request = {{"verb", verb}, {"inputs", inputs}, {"parameters", params}};
    if (check) request["claim"] = c["claim"];
    plan.push_back({id, std::move(request)});
  }

  fs::path out_dir = options.output_dir
                         ? fs::path(*options.output_dir)
                         : base / manifest.value("output_dir", std::string("reports"));
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + out_dir.string() + ": " + ec.message());

  SuiteResult result;
  result.output_dir = out_dir.string();
  json entries = json::array();
  json counts = {{"pass", 0}, {"fail", 0}, {"vacuous", 0}, {"ok", 0}, {"error", 0}};
  for (const Planned& p : plan) {
    json report;
    try {
      report = execute(p.request, base.string());
    } catch (const Error& e) {
      report = {{"tool", {{"name", "absnorm"}, {"version", version()}}},
                {"verb", p.request["verb"]},
                {"status", "error"},
                {"error", {{"code", to_string(e.code())}, {"message", e.what()}}}};
    }
    report["id"] = p.id;
    report["tolerances"] = tolerances;
    const std::string status = report_status(report);
    const std::string file = p.id + ".json";
    write_atomically(out_dir / file, report.dump(2) + "\n");
    counts[status] = counts.value(status, 0) + 1;
    if (status == "fail" || status == "error") ++result.failed;
    json entry = {{"id", p.id}, {"verb", p.request["verb"]}, {"status", status}, {"report", file}};
    if (p.request.contains("claim")) entry["claim"] = p.request["claim"];
    if (status == "vacuous") entry["annotation"] = "vacuous: hypothesis not met on the samples; counted as pass";
    if (status == "error") entry["error"] = report["error"];
    entries.push_back(entry);
  }

  json summary;
  summary["tool"] = {{"name", "absnorm"}, {"version", version()}};
  summary["manifest"] = {{"name", manifest.value("name", mpath.stem().string())},
                         {"file", mpath.filename().string()},
                         {"hash", fnv1a_hex(bytes)}};
  summary["tolerances"] = tolerances;
  summary["checks"] = entries;
  summary["counts"] = counts;
  summary["exit_status"] = result.exit_status();
  write_atomically(out_dir / "summary.json", summary.dump(2) + "\n");
  result.summary = std::move(summary);
  return result;
}

}  // namespace absnorm

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "absnorm/norm2.hpp"

namespace absnorm {

const char* version();

/// Spec input resolved to JSON. `hash` is FNV-1a of the file bytes (or of the
/// compact dump for inline specs).
struct LoadedInput {
  std::string path;  // empty for inline specs
  std::string hash;
  nlohmann::json spec;
};

/// Reads every input of a request: a string is a path (relative to base_dir),
/// an object is an inline spec. Throws kIo/kParse; nothing is constructed.
nlohmann::json load_inputs(const nlohmann::json& inputs, const std::string& base_dir,
                           std::vector<LoadedInput>* loaded = nullptr);

/// Runs one request
///   {"verb": ..., "claim": ..., "inputs": {name: path|spec}, "parameters": {...}}
/// and returns the report. Verbs: profile, curve, dual, r, moduli, slice,
/// sum-check, bm, check. Computation errors are embedded in the report
/// ("status": "error"); only malformed requests and unreadable inputs throw.
nlohmann::json execute(const nlohmann::json& request, const std::string& base_dir = ".");

/// Status of a report: pass, fail, vacuous, ok or error.
std::string report_status(const nlohmann::json& report);

/// "t,f" CSV with n+1 rows and 12 significant digits.
std::string curve_csv(const AbsoluteNorm& norm, int n);

}  // namespace absnorm

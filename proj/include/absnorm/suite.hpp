#pragma once

#include <optional>
#include <string>

#include <json.hpp>

namespace absnorm {

/// Manifest:
///   {"name": ..., "output_dir": ..., "tolerances": {"tol": ...},
///    "commands": [{"id": ..., "verb": ..., "claim": ..., "inputs": {...},
///                  "parameters": {...}}, ...]}
/// Input paths and output_dir are relative to the manifest's directory.
/// Global tolerances fill in parameters of the non-check verbs; checks keep
/// their own fixed tolerances.
struct SuiteOptions {
  std::optional<std::string> output_dir;  // overrides the manifest
  std::optional<double> tol;              // overrides manifest tolerances.tol
};

struct SuiteResult {
  nlohmann::json summary;
  std::string output_dir;
  int failed = 0;  // fail or error verdicts
  int exit_status() const { return failed == 0 ? 0 : 1; }
};

/// Validates the whole manifest (every input file must exist and parse)
/// before running anything; throws kIo/kParse otherwise. Per-command errors
/// are recorded in that command's report and do not stop the run. Each
/// report and the summary are written via a temporary file and a rename.
SuiteResult run_suite(const std::string& manifest_path, const SuiteOptions& options = {});

}  // namespace absnorm

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace absnorm {

enum class Verdict { kPass, kFail, kVacuous };

const char* to_string(Verdict verdict);

/// Outcome of checking one claim on one instance. A fail verdict always
/// carries the offending sample together with every intermediate value needed
/// to replay it.
struct VerificationReport {
  std::string claim_id;
  nlohmann::json instance = nlohmann::json::object();
  nlohmann::json parameters = nlohmann::json::object();
  long samples = 0;
  double worst_margin = 0.0;
  Verdict verdict = Verdict::kPass;
  std::optional<nlohmann::json> counterexample;
  std::vector<std::string> notes;

  bool failed() const { return verdict == Verdict::kFail; }
};

nlohmann::json to_json(const VerificationReport& report);

/// Accumulates per-sample margins (negative = violation) and keeps the worst
/// one. The counterexample payload is only built when a new worst violation
/// shows up.
class MarginTracker {
 public:
  void observe(double margin, const std::function<nlohmann::json()>& sample);
  void count(long n = 1) { samples_ += n; }

  bool any() const { return observed_; }
  double worst() const { return worst_; }
  long samples() const { return samples_; }

  /// Fills samples/worst_margin/verdict/counterexample. With no observations
  /// the verdict is vacuous.
  void finish(VerificationReport& report) const;

 private:
  bool observed_ = false;
  double worst_ = 0.0;
  long samples_ = 0;
  std::optional<nlohmann::json> counterexample_;
};

}  // namespace absnorm

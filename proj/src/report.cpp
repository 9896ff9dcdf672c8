#include "absnorm/report.hpp"

#include "absnorm/errors.hpp"

namespace absnorm {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidNorm: return "InvalidNorm";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInfinityNormExcluded: return "InfinityNormExcluded";
    case ErrorCode::kResolutionExhausted: return "ResolutionExhausted";
    case ErrorCode::kCertificationUnavailable: return "CertificationUnavailable";
    case ErrorCode::kEmptySample: return "EmptySample";
    case ErrorCode::kSingularMatrix: return "SingularMatrix";
    case ErrorCode::kInconsistency: return "Inconsistency";
    case ErrorCode::kNoQualifyingSamples: return "NoQualifyingSamples";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kVacuous: return "vacuous";
  }
  return "unknown";
}

nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json out;
  out["claim_id"] = report.claim_id;
  out["instance"] = report.instance;
  out["parameters"] = report.parameters;
  out["samples"] = report.samples;
  out["worst_margin"] = report.worst_margin;
  out["verdict"] = to_string(report.verdict);
  out["counterexample"] =
      report.counterexample ? *report.counterexample : nlohmann::json(nullptr);
  out["notes"] = report.notes;
  if (report.verdict != Verdict::kFail) {
    out["statement"] = "no counterexample found at the stated resolution";
  }
  return out;
}

void MarginTracker::observe(double margin,
                            const std::function<nlohmann::json()>& sample) {
  if (!observed_ || margin < worst_) {
    worst_ = margin;
    if (margin < 0.0) counterexample_ = sample();
  }
  observed_ = true;
}

void MarginTracker::finish(VerificationReport& report) const {
  report.samples = samples_;
  if (!observed_) {
    report.verdict = Verdict::kVacuous;
    report.worst_margin = 0.0;
    report.counterexample.reset();
    return;
  }
  report.worst_margin = worst_;
  if (worst_ < 0.0) {
    report.verdict = Verdict::kFail;
    report.counterexample = counterexample_;
  } else {
    report.verdict = Verdict::kPass;
    report.counterexample.reset();
  }
}

}  // namespace absnorm

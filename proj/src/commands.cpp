#include "absnorm/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "absnorm/bm.hpp"
#include "absnorm/dual.hpp"
#include "absnorm/errors.hpp"
#include "absnorm/geometry.hpp"
#include "absnorm/spec_io.hpp"
#include "absnorm/verify.hpp"

#ifndef ABSNORM_VERSION
#define ABSNORM_VERSION "0.0.0"
#endif

namespace absnorm {

using nlohmann::json;

const char* version() { return ABSNORM_VERSION; }

namespace {

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Records every parameter actually used, defaults included, so the report
// states the effective resolutions and tolerances.
class Params {
 public:
  explicit Params(const json& given) : given_(given) {
    if (!given_.is_object()) {
      throw Error(ErrorCode::kParse, "field 'parameters': expected an object");
    }
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    T value = fallback;
    if (given_.contains(key) && !given_.at(key).is_null()) {
      try {
        value = given_.at(key).get<T>();
      } catch (const json::exception&) {
        throw Error(ErrorCode::kParse, "field 'parameters." + key + "': wrong type");
      }
    }
    used_[key] = value;
    return value;
  }

  bool has(const std::string& key) const { return given_.contains(key); }

  Vector vector(const std::string& key) {
    if (!given_.contains(key)) {
      throw Error(ErrorCode::kParse, "field 'parameters." + key + "': missing");
    }
    Vector out;
    const json& v = given_.at(key);
    try {
      if (v.is_array() && !v.empty() && v.front().is_array()) {
        for (const auto& row : v)
          for (const auto& x : row) out.push_back(x.get<double>());
      } else {
        out = v.get<Vector>();
      }
    } catch (const json::exception&) {
      throw Error(ErrorCode::kParse,
                  "field 'parameters." + key + "': expected numbers");
    }
    used_[key] = v;
    return out;
  }

  const json& used() const { return used_; }

  std::vector<std::string> unused() const {
    std::vector<std::string> out;
    for (const auto& [key, value] : given_.items())
      if (!used_.contains(key)) out.push_back(key);
    return out;
  }

 private:
  const json& given_;
  json used_ = json::object();
};

class Inputs {
 public:
  explicit Inputs(const json& specs) : specs_(specs) {}

  const json& spec(const std::string& name) const {
    if (!specs_.contains(name)) {
      throw Error(ErrorCode::kParse, "field 'inputs." + name + "': missing");
    }
    return specs_.at(name);
  }
  bool has(const std::string& name) const { return specs_.contains(name); }

  AbsoluteNorm norm(const std::string& name) const {
    return wrap(name, [&] { return parse_norm_spec(spec(name)); });
  }
  FiniteSpace space(const std::string& name) const {
    return wrap(name, [&] { return parse_space_spec(spec(name)); });
  }

 private:
  template <class F>
  static auto wrap(const std::string& name, F make) -> decltype(make()) {
    try {
      return make();
    } catch (const Error& e) {
      throw Error(e.code(), "input '" + name + "': " + e.what());
    }
  }

  const json& specs_;
};

json interval(const Interval& i) { return {{"lo", i.lo}, {"hi", i.hi}}; }

json point(Point2 p) { return json::array({p.a, p.b}); }

json bracket(const PointBracket& b) {
  return {{"value", interval(b.value)},
          {"argbest", b.argbest},
          {"evaluations", b.evaluations},
          {"certified", b.certified},
          {"budget_exhausted", b.budget_exhausted}};
}

json moduli(const ModuliReport& r) {
  json out;
  if (r.s) out["s"] = interval(*r.s);
  if (r.lasq_defect) out["lasq_defect"] = interval(*r.lasq_defect);
  out["resolution"] = r.resolution;
  out["lipschitz_margin"] = r.lipschitz_margin;
  out["gap"] = r.gap;
  out["certified"] = r.certified;
  out["budget_exhausted"] = r.budget_exhausted;
  out["evaluations"] = r.evaluations;
  out["witness"] = r.witness;
  out["witness_inner"] = interval(r.witness_inner);
  return out;
}

SearchOptions search(Params& p, const std::string& prefix = "") {
  SearchOptions o;
  o.resolution = p.get<long>(prefix + "resolution", 0);
  o.gap = p.get<double>(prefix + "gap", 0.0);
  return o;
}

json run_profile(const Inputs& in, Params& p) {
  const AbsoluteNorm F = in.norm("norm");
  const double tol = p.get<double>("tol", 1e-9);
  const NormProfile pr = profile(F, tol, p.get<int>("resolution", 1024));
  json out;
  out["F11"] = pr.F11;
  out["class"] = to_string(pr.extreme);
  out["rF"] = pr.rF;
  out["rF_swapped"] = pr.rF_swapped;
  out["sc_point"] = {{"(1,0)", pr.sc_at_10}, {"(0,1)", pr.sc_at_01}};
  out["f1"] = pr.f_at_1;
  out["po"] = pr.po.witness ? point(*pr.po.witness) : json(nullptr);
  out["po_best"] = point(pr.po.best);
  out["po_residual"] = pr.po.best_residual;
  if (pr.asq_obstruction) {
    out["asq_obstruction"] = *pr.asq_obstruction;
  } else {
    out["asq_obstruction"] = "excluded";
    out["asq_note"] = pr.asq_note;
  }
  return out;
}

json run_curve(const Inputs& in, Params& p) {
  const AbsoluteNorm F = in.norm("norm");
  const int n = p.get<int>("n", 100);
  const double tol = p.get<double>("tol", 1e-13);
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "curve needs n >= 2");
  json t = json::array(), f = json::array();
  for (int i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) / n;
    t.push_back(x);
    f.push_back(boundary(F, x, tol));
  }
  return {{"t", t}, {"f", f}};
}

json run_dual(const Inputs& in, Params& p) {
  const AbsoluteNorm F = in.norm("norm");
  const AbsoluteNorm D = dual(F, p.get<int>("resolution", kDefaultDualResolution));
  json out;
  out["dual"] = to_spec(D);
  if (auto v = D.exact_polygon()) {
    json vs = json::array();
    for (Point2 q : *v) vs.push_back(point(q));
    out["vertices"] = vs;
  }
  out["F*(1,1)"] = D(1.0, 1.0);
  const VerificationReport bidual =
      bidual_check(F, p.get<int>("check_resolution", 256), p.get<double>("tol", 1e-6));
  out["bidual_max_deviation"] = bidual.parameters["max_deviation"];
  out["bidual_verdict"] = to_string(bidual.verdict);
  return out;
}

json run_r(const Inputs& in, Params& p) {
  const AbsoluteNorm F = in.norm("norm");
  const double tol = p.get<double>("tol", 1e-9);
  json out;
  out["rF"] = r_of(F, tol);
  out["bisection"] = r_of_bisection(F, tol);
  const auto exact = r_of_exact(F);
  out["exact"] = exact ? json(*exact) : json(nullptr);
  return out;
}

json run_moduli(const Inputs& in, Params& p) {
  const FiniteSpace X = in.space("space");
  const std::string what = p.get<std::string>("what", "s");
  SearchOptions o = search(p);
  if (p.has("tol")) o.gap = p.get<double>("tol", 0.0);
  json out;
  if (what == "s" || what == "both") out["s"] = moduli(s_modulus(X, o));
  if (what == "lasq" || what == "both") out["lasq"] = moduli(lasq_defect(X, o));
  if (what == "m") {
    const Vector x = p.vector("x");
    out["m"] = bracket(m_of_x(X, x, o));
  }
  if (out.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "field 'parameters.what': expected s, lasq, both or m");
  }
  return out;
}

json run_slice(const Inputs& in, Params& p) {
  const FiniteSpace X = in.space("space");
  SliceQuery q;
  q.functional = p.vector("functional");
  q.eps = p.get<double>("eps", 0.1);
  SearchOptions o = search(p);
  if (p.has("tol")) o.gap = p.get<double>("tol", 0.0);
  return {{"diameter", bracket(slice_diameter(X, q, o))}};
}

json run_bm(const Inputs& in, Params& p) {
  const FiniteSpace X = in.space("X");
  const FiniteSpace Y = in.space("Y");
  json out;
  if (p.has("map")) {
    const LinearMap T(X.dim(), p.vector("map"));
    SearchOptions o = search(p);
    const PointBracket fwd = operator_norm(T, X, Y, o);
    const PointBracket bwd = operator_norm(T.inverse(), Y, X, o);
    out["forward"] = interval(fwd.value);
    out["backward"] = interval(bwd.value);
    out["upper_bound"] = fwd.value.hi * bwd.value.hi;
    out["map"] = T.entries();
    return out;
  }
  const BmResult r = bm_upper(X, Y, p.get<int>("restarts", 64), p.get<long>("resolution", 0));
  out["upper_bound"] = r.value;
  out["map"] = r.map.entries();
  out["forward"] = interval(r.forward);
  out["backward"] = interval(r.backward);
  out["starts"] = r.starts;
  out["note"] = "upper bound on the Banach-Mazur distance, not claimed tight";
  return out;
}

const std::set<std::string> kSumClaims = {"prop-loh", "prop-lasq-i", "prop-lasq-ii",
                                          "prop-lasq-iii"};

VerificationReport run_claim(const std::string& claim, const Inputs& in, Params& p) {
  if (claim == "lemma-infty") {
    return check_lemma_infty(in.norm("F"), p.get<int>("resolution", 256));
  }
  if (claim == "lemma-loh2") {
    return check_loh2(in.norm("F"), p.get<long>("samples", 10000));
  }
  if (claim == "lemma-loh3") {
    const AbsoluteNorm F = in.norm("F");
    return check_loh3(F, p.get<double>("eps", 0.1), p.get<int>("resolution", 100));
  }
  if (claim == "bidual") {
    const AbsoluteNorm F = in.norm("F");
    return bidual_check(F, p.get<int>("resolution", 256), p.get<double>("tol", 1e-6));
  }
  if (claim == "duality-chain") {
    return duality_chain_check(in.norm("F"), p.get<int>("resolution", 64));
  }
  if (claim == "norm-facts") {
    const AbsoluteNorm F = in.norm("F");
    return validate(F, p.get<int>("resolution", 256), p.get<double>("tol", 1e-9));
  }
  if (kSumClaims.contains(claim)) {
    const FiniteSpace X = in.space("X");
    const FiniteSpace Y = in.space("Y");
    const AbsoluteNorm F = in.norm("F");
    if (claim == "prop-loh") {
      PropLohOptions o;
      o.resolution = p.get<long>("resolution", o.resolution);
      o.arc_samples = p.get<int>("arc_samples", o.arc_samples);
      o.sum = search(p, "sum_");
      o.factor = search(p, "factor_");
      return check_prop_loh(X, Y, F, p.get<double>("eps", 0.2), o);
    }
    if (claim == "prop-lasq-iii") {
      AsqOptions o;
      o.resolution = p.get<long>("resolution", o.resolution);
      o.arc_samples = p.get<int>("arc_samples", o.arc_samples);
      return check_asq_impossible(X, Y, F, o);
    }
    TransferOptions o;
    o.resolution = p.get<long>("resolution", o.resolution);
    o.sum = search(p, "sum_");
    o.factor = search(p, "factor_");
    VerificationReport r = check_sum_lasq_transfer(X, Y, F, p.get<double>("mu", 0.99), o);
    if (claim == "prop-lasq-ii") {
      r.claim_id = claim;
      r.notes.push_back(
          "the weak-null condition is vacuous in finite dimensions; this is the "
          "check of prop-lasq-i and makes no WASQ claim");
    }
    return r;
  }
  if (claim == "prop-banach-mazur") {
    const FiniteSpace X = in.space("X");
    const LinearMap T(X.dim(), p.vector("map"));
    std::optional<FiniteSpace> target;
    if (in.has("target")) target = in.space("target");
    return check_s_isometry_invariance(X, T, search(p), target);
  }
  throw Error(ErrorCode::kInvalidArgument, "field 'claim': unknown claim '" + claim + "'");
}

}  // namespace

json load_inputs(const json& inputs, const std::string& base_dir,
                 std::vector<LoadedInput>* loaded) {
  if (!inputs.is_object()) {
    throw Error(ErrorCode::kParse, "field 'inputs': expected an object");
  }
  json specs = json::object();
  for (const auto& [name, value] : inputs.items()) {
    LoadedInput li;
    if (value.is_string()) {
      std::filesystem::path path = value.get<std::string>();
      if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
      li.path = value.get<std::string>();
      const std::string bytes = read_bytes(path.string());
      li.hash = fnv1a_hex(bytes);
      try {
        li.spec = json::parse(bytes);
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::kParse, "input '" + name + "' (" + path.string() + "): " + e.what());
      }
    } else if (value.is_object()) {
      li.spec = value;
      li.hash = fnv1a_hex(value.dump());
    } else {
      throw Error(ErrorCode::kParse,
                  "field 'inputs." + name + "': expected a path or an inline spec");
    }
    if (!li.spec.is_object() || !li.spec.contains("type")) {
      throw Error(ErrorCode::kParse, "input '" + name + "': field 'type': missing");
    }
    specs[name] = li.spec;
    if (loaded) loaded->push_back(std::move(li));
  }
  return specs;
}

json execute(const json& request, const std::string& base_dir) {
  if (!request.is_object() || !request.contains("verb") || !request["verb"].is_string()) {
    throw Error(ErrorCode::kParse, "field 'verb': missing");
  }
  std::string verb = request["verb"];
  std::string claim;
  if (verb == "check" || verb == "sum-check") {
    if (!request.contains("claim") || !request["claim"].is_string()) {
      throw Error(ErrorCode::kParse, "field 'claim': missing");
    }
    claim = request["claim"];
    if (verb == "sum-check" && !kSumClaims.contains(claim)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "field 'claim': sum-check takes prop-loh or prop-lasq-i/ii/iii");
    }
  }
  std::vector<LoadedInput> loaded;
  const json specs = load_inputs(request.value("inputs", json::object()), base_dir, &loaded);
  const json given = request.value("parameters", json::object());

  json report;
  report["tool"] = {{"name", "absnorm"}, {"version", version()}};
  report["verb"] = verb;
  if (!claim.empty()) report["claim"] = claim;
  json inputs = json::object();
  std::size_t k = 0;
  for (const auto& [name, spec] : specs.items()) {
    const LoadedInput& li = loaded[k++];
    inputs[name] = {{"path", li.path.empty() ? json(nullptr) : json(li.path)},
                    {"hash", li.hash},
                    {"spec", spec}};
  }
  report["inputs"] = inputs;

  Params params(given);
  const Inputs in(specs);
  try {
    if (verb == "check" || verb == "sum-check") {
      const VerificationReport r = run_claim(claim, in, params);
      report["status"] = to_string(r.verdict);
      report["result"] = to_json(r);
    } else {
      json result;
      if (verb == "profile") result = run_profile(in, params);
      else if (verb == "curve") result = run_curve(in, params);
      else if (verb == "dual") result = run_dual(in, params);
      else if (verb == "r") result = run_r(in, params);
      else if (verb == "moduli") result = run_moduli(in, params);
      else if (verb == "slice") result = run_slice(in, params);
      else if (verb == "bm") result = run_bm(in, params);
      else throw Error(ErrorCode::kInvalidArgument, "field 'verb': unknown verb '" + verb + "'");
      report["status"] = "ok";
      report["result"] = result;
    }
  } catch (const Error& e) {
    report["status"] = "error";
    report["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
  } catch (const std::exception& e) {
    report["status"] = "error";
    report["error"] = {{"code", "Internal"}, {"message", e.what()}};
  }
  report["parameters"] = params.used();
  const auto unused = params.unused();
  if (!unused.empty()) report["ignored_parameters"] = unused;
  return report;
}

std::string report_status(const json& report) {
  return report.value("status", std::string("error"));
}

std::string curve_csv(const AbsoluteNorm& F, int n) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "curve needs n >= 2");
  std::string out = "t,f\n";
  char line[96];
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    std::snprintf(line, sizeof line, "%.12g,%.12g\n", t, boundary(F, t, 1e-13));
    out += line;
  }
  return out;
}

}  // namespace absnorm

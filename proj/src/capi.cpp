#include "absnorm/absnorm.h"

#include <exception>
#include <new>
#include <string>

#include "absnorm/bm.hpp"
#include "absnorm/commands.hpp"
#include "absnorm/dual.hpp"
#include "absnorm/errors.hpp"
#include "absnorm/geometry.hpp"
#include "absnorm/space.hpp"
#include "absnorm/spec_io.hpp"
#include "absnorm/suite.hpp"

struct absnorm_norm {
  absnorm::AbsoluteNorm value;
};
struct absnorm_space {
  absnorm::FiniteSpace value;
};
struct absnorm_map {
  absnorm::LinearMap value;
};
struct absnorm_text {
  std::string value;
};

namespace {

thread_local std::string last_error;

absnorm_status status_of(absnorm::ErrorCode code) {
  return static_cast<absnorm_status>(static_cast<int>(code));
}

// Runs body, translating exceptions into a status and the thread-local message.
template <class F>
absnorm_status guarded(F body) {
  try {
    body();
    last_error.clear();
    return ABSNORM_OK;
  } catch (const absnorm::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return ABSNORM_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return ABSNORM_E_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw absnorm::Error(absnorm::ErrorCode::kInvalidArgument, what);
}

absnorm_text* text(std::string s) { return new absnorm_text{std::move(s)}; }

absnorm_status moduli(const absnorm_space* space, long resolution, double gap,
                      absnorm_interval* out, double* margin, bool defect) {
  bool certified = true;
  const absnorm_status st = guarded([&] {
    require(space && out, "null argument");
    absnorm::SearchOptions o;
    o.resolution = resolution;
    o.gap = gap;
    const absnorm::ModuliReport r =
        defect ? absnorm::lasq_defect(space->value, o) : absnorm::s_modulus(space->value, o);
    const absnorm::Interval i = defect ? *r.lasq_defect : *r.s;
    *out = {i.lo, i.hi};
    if (margin) *margin = r.lipschitz_margin;
    certified = r.certified;
  });
  if (st == ABSNORM_OK && !certified) {
    last_error = "no certified bracket above dimension 4; estimate returned";
    return ABSNORM_E_CERTIFICATION_UNAVAILABLE;
  }
  return st;
}

}  // namespace

extern "C" {

const char* absnorm_version(void) { return absnorm::version(); }

const char* absnorm_status_name(absnorm_status status) {
  if (status == ABSNORM_OK) return "Ok";
  if (status == ABSNORM_E_INTERNAL) return "Internal";
  if (status >= ABSNORM_E_INVALID_ARGUMENT && status <= ABSNORM_E_IO) {
    return absnorm::to_string(static_cast<absnorm::ErrorCode>(status));
  }
  return "Unknown";
}

const char* absnorm_last_error(void) { return last_error.c_str(); }

const char* absnorm_text_data(const absnorm_text* t) { return t ? t->value.c_str() : ""; }
size_t absnorm_text_size(const absnorm_text* t) { return t ? t->value.size() : 0; }
void absnorm_text_free(absnorm_text* t) { delete t; }

absnorm_status absnorm_norm_parse(const char* json, absnorm_norm** out) {
  return guarded([&] {
    require(json && out, "null argument");
    nlohmann::json spec;
    try {
      spec = nlohmann::json::parse(json);
    } catch (const nlohmann::json::parse_error& e) {
      throw absnorm::Error(absnorm::ErrorCode::kParse, e.what());
    }
    *out = new absnorm_norm{absnorm::parse_norm_spec(spec)};
  });
}

absnorm_status absnorm_norm_load(const char* path, absnorm_norm** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new absnorm_norm{absnorm::load_norm_spec(path)};
  });
}

absnorm_status absnorm_norm_p(double p, absnorm_norm** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = new absnorm_norm{absnorm::AbsoluteNorm::p(p)};
  });
}

absnorm_status absnorm_norm_polygon(const double* vertices, size_t count, absnorm_norm** out) {
  return guarded([&] {
    require(vertices && out, "null argument");
    std::vector<absnorm::Point2> v(count);
    for (size_t i = 0; i < count; ++i) v[i] = {vertices[2 * i], vertices[2 * i + 1]};
    *out = new absnorm_norm{absnorm::AbsoluteNorm::polygonal(std::move(v))};
  });
}

void absnorm_norm_free(absnorm_norm* norm) { delete norm; }

absnorm_status absnorm_norm_spec(const absnorm_norm* norm, absnorm_text** out) {
  return guarded([&] {
    require(norm && out, "null argument");
    *out = text(absnorm::to_spec(norm->value).dump());
  });
}

absnorm_status absnorm_norm_eval(const absnorm_norm* norm, double a, double b, double* out) {
  return guarded([&] {
    require(norm && out, "null argument");
    *out = norm->value(a, b);
  });
}

absnorm_status absnorm_boundary(const absnorm_norm* norm, double t, double tol, double* out) {
  return guarded([&] {
    require(norm && out, "null argument");
    *out = absnorm::boundary(norm->value, t, tol > 0 ? tol : absnorm::kDefaultBoundaryTol);
  });
}

absnorm_status absnorm_r(const absnorm_norm* norm, double tol, double* out) {
  return guarded([&] {
    require(norm && out, "null argument");
    *out = absnorm::r_of(norm->value, tol > 0 ? tol : 1e-9);
  });
}

absnorm_status absnorm_dual(const absnorm_norm* norm, int resolution, absnorm_norm** out) {
  return guarded([&] {
    require(norm && out, "null argument");
    *out = new absnorm_norm{absnorm::dual(
        norm->value, resolution > 0 ? resolution : absnorm::kDefaultDualResolution)};
  });
}

absnorm_status absnorm_lasq2_modulus(const absnorm_norm* norm, double eps, double* out) {
  return guarded([&] {
    require(norm && out, "null argument");
    *out = absnorm::lasq2_modulus(norm->value, eps);
  });
}

absnorm_status absnorm_loh3_modulus(const absnorm_norm* norm, double eps, double* out) {
  return guarded([&] {
    require(norm && out, "null argument");
    *out = absnorm::loh3_modulus(norm->value, eps);
  });
}

absnorm_status absnorm_curve_csv(const absnorm_norm* norm, int n, absnorm_text** out) {
  return guarded([&] {
    require(norm && out, "null argument");
    *out = text(absnorm::curve_csv(norm->value, n));
  });
}

absnorm_status absnorm_space_parse(const char* json, absnorm_space** out) {
  return guarded([&] {
    require(json && out, "null argument");
    nlohmann::json spec;
    try {
      spec = nlohmann::json::parse(json);
    } catch (const nlohmann::json::parse_error& e) {
      throw absnorm::Error(absnorm::ErrorCode::kParse, e.what());
    }
    *out = new absnorm_space{absnorm::parse_space_spec(spec)};
  });
}

absnorm_status absnorm_space_load(const char* path, absnorm_space** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new absnorm_space{absnorm::load_space_spec(path)};
  });
}

absnorm_status absnorm_space_p(double p, int dim, absnorm_space** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = new absnorm_space{absnorm::FiniteSpace::p(p, dim)};
  });
}

absnorm_status absnorm_space_sum(const absnorm_space* left, const absnorm_space* right,
                                 const absnorm_norm* F, absnorm_space** out) {
  return guarded([&] {
    require(left && right && F && out, "null argument");
    *out = new absnorm_space{absnorm::FiniteSpace::sum(left->value, right->value, F->value)};
  });
}

void absnorm_space_free(absnorm_space* space) { delete space; }

int absnorm_space_dim(const absnorm_space* space) { return space ? space->value.dim() : 0; }

absnorm_status absnorm_space_norm(const absnorm_space* space, const double* x, size_t n,
                                  double* out) {
  return guarded([&] {
    require(space && x && out, "null argument");
    *out = absnorm::norm(space->value, std::vector<double>(x, x + n));
  });
}

absnorm_status absnorm_s_modulus(const absnorm_space* space, long resolution, double gap,
                                 absnorm_interval* out, double* margin) {
  return moduli(space, resolution, gap, out, margin, false);
}

absnorm_status absnorm_lasq_defect(const absnorm_space* space, long resolution, double gap,
                                   absnorm_interval* out, double* margin) {
  return moduli(space, resolution, gap, out, margin, true);
}

absnorm_status absnorm_map_create(int dim, const double* entries, absnorm_map** out) {
  return guarded([&] {
    require(entries && out && dim >= 1, "null argument or dim < 1");
    const size_t n = static_cast<size_t>(dim) * static_cast<size_t>(dim);
    *out = new absnorm_map{absnorm::LinearMap(dim, absnorm::Vector(entries, entries + n))};
  });
}

void absnorm_map_free(absnorm_map* map) { delete map; }

absnorm_status absnorm_operator_norm(const absnorm_map* map, const absnorm_space* from,
                                     const absnorm_space* to, long resolution,
                                     absnorm_interval* out) {
  return guarded([&] {
    require(map && from && to && out, "null argument");
    absnorm::SearchOptions o;
    o.resolution = resolution;
    const absnorm::PointBracket b = absnorm::operator_norm(map->value, from->value, to->value, o);
    *out = {b.value.lo, b.value.hi};
  });
}

absnorm_status absnorm_bm_upper(const absnorm_space* X, const absnorm_space* Y, int restarts,
                                long resolution, double* out, double* best_map) {
  return guarded([&] {
    require(X && Y && out, "null argument");
    const absnorm::BmResult r =
        absnorm::bm_upper(X->value, Y->value, restarts > 0 ? restarts : 64, resolution);
    *out = r.value;
    if (best_map) {
      const auto& e = r.map.entries();
      std::copy(e.begin(), e.end(), best_map);
    }
  });
}

absnorm_status absnorm_execute(const char* request_json, const char* base_dir,
                               absnorm_text** report) {
  return guarded([&] {
    require(request_json && report, "null argument");
    nlohmann::json request;
    try {
      request = nlohmann::json::parse(request_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw absnorm::Error(absnorm::ErrorCode::kParse, e.what());
    }
    *report = text(absnorm::execute(request, base_dir ? base_dir : ".").dump(2) + "\n");
  });
}

absnorm_status absnorm_suite_run(const char* manifest_path, const char* output_dir,
                                 const double* tol, absnorm_text** summary, int* failed) {
  return guarded([&] {
    require(manifest_path, "null argument");
    absnorm::SuiteOptions o;
    if (output_dir) o.output_dir = output_dir;
    if (tol) o.tol = *tol;
    const absnorm::SuiteResult r = absnorm::run_suite(manifest_path, o);
    if (summary) *summary = text(r.summary.dump(2) + "\n");
    if (failed) *failed = r.failed;
  });
}

}  // extern "C"

#include "absnorm/spec_io.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "absnorm/dual.hpp"
#include "absnorm/errors.hpp"

namespace absnorm {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kParse, "field '" + path + "': " + what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const json& field(const json& spec, const std::string& path, const char* key) {
  if (!spec.is_object()) bad(path.empty() ? "<root>" : path, "expected an object");
  const auto it = spec.find(key);
  if (it == spec.end()) bad(join(path, key), "missing");
  return *it;
}

std::string type_of(const json& spec, const std::string& path) {
  const json& t = field(spec, path, "type");
  if (!t.is_string()) bad(join(path, "type"), "expected a string");
  return t.get<std::string>();
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) bad(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad(path, "expected a finite number");
  return x;
}

double exponent(const json& v, const std::string& path) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    bad(path, "expected a number >= 1 or \"inf\", got \"" + s + "\"");
  }
  const double p = number(v, path);
  if (p < 1.0) bad(path, "expected a number >= 1 or \"inf\"");
  return p;
}

int positive_int(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 1 ||
      v.get<long long>() > std::numeric_limits<int>::max()) {
    bad(path, "expected a positive integer");
  }
  return v.get<int>();
}

std::vector<Vector> matrix_rows(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) bad(path, "expected a nonempty array of arrays");
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || v[i].empty()) bad(at, "expected a nonempty array of numbers");
    Vector row;
    for (std::size_t j = 0; j < v[i].size(); ++j) {
      row.push_back(number(v[i][j], at + "[" + std::to_string(j) + "]"));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Re-raise constructor errors with the field path attached.
template <class Fn>
auto with_path(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw;
    throw Error(e.code(), "field '" + (path.empty() ? std::string("<root>") : path) +
                              "': " + e.what());
  }
}

AbsoluteNorm parse_norm(const json& spec, const std::string& path) {
  const std::string type = type_of(spec, path);
  if (type == "p") {
    const double p = exponent(field(spec, path, "p"), join(path, "p"));
    return std::isinf(p) ? AbsoluteNorm::infinity() : AbsoluteNorm::p(p);
  }
  if (type == "polygon") {
    const std::string at = join(path, "vertices");
    const auto rows = matrix_rows(field(spec, path, "vertices"), at);
    std::vector<Point2> vertices;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != 2) bad(at + "[" + std::to_string(i) + "]", "expected [a, b]");
      vertices.push_back({rows[i][0], rows[i][1]});
    }
    return with_path(at, [&] { return AbsoluteNorm::polygonal(vertices); });
  }
  if (type == "swap") {
    return swap(parse_norm(field(spec, path, "inner"), join(path, "inner")));
  }
  if (type == "dual") {
    const AbsoluteNorm inner = parse_norm(field(spec, path, "inner"), join(path, "inner"));
    int resolution = kDefaultDualResolution;
    if (spec.contains("resolution")) {
      resolution = positive_int(spec["resolution"], join(path, "resolution"));
    }
    return with_path(join(path, "resolution"), [&] { return dual(inner, resolution); });
  }
  bad(join(path, "type"), "unknown norm type \"" + type + "\"");
}

FiniteSpace parse_space(const json& spec, const std::string& path) {
  const std::string type = type_of(spec, path);
  if (type == "p") {
    const double p = exponent(field(spec, path, "p"), join(path, "p"));
    const int dim = positive_int(field(spec, path, "dim"), join(path, "dim"));
    return FiniteSpace::p(p, dim);
  }
  if (type == "polyhedral") {
    const std::string at = join(path, "functionals");
    auto rows = matrix_rows(field(spec, path, "functionals"), at);
    return with_path(at, [&] { return FiniteSpace::polyhedral(std::move(rows)); });
  }
  if (type == "fsum") {
    const FiniteSpace left = parse_space(field(spec, path, "left"), join(path, "left"));
    const FiniteSpace right = parse_space(field(spec, path, "right"), join(path, "right"));
    const AbsoluteNorm F = parse_norm(field(spec, path, "F"), join(path, "F"));
    return FiniteSpace::sum(left, right, F);
  }
  if (type == "mapped") {
    const FiniteSpace inner = parse_space(field(spec, path, "inner"), join(path, "inner"));
    const int n = inner.dim();
    const bool forward = spec.contains("matrix");
    const char* key = forward ? "matrix" : "inverse";
    const std::string at = join(path, key);
    const auto rows = matrix_rows(field(spec, path, key), at);
    if (static_cast<int>(rows.size()) != n) bad(at, "expected " + std::to_string(n) + " rows");
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[i].size()) != n) {
        bad(at + "[" + std::to_string(i) + "]", "expected " + std::to_string(n) + " entries");
      }
      for (int j = 0; j < n; ++j) m(i, j) = rows[i][j];
    }
    if (forward) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
      if (!lu.isInvertible()) {
        throw Error(ErrorCode::kSingularMatrix, "field '" + at + "': matrix is singular");
      }
      m = lu.inverse();
    }
    Vector inverse(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) inverse[i * n + j] = m(i, j);
    }
    return with_path(at, [&] { return FiniteSpace::mapped(inner, std::move(inverse)); });
  }
  bad(join(path, "type"), "unknown space type \"" + type + "\"");
}

json exponent_json(double p) {
  if (std::isinf(p)) return "inf";
  return p;
}

}  // namespace

AbsoluteNorm parse_norm_spec(const json& spec) { return parse_norm(spec, ""); }

FiniteSpace parse_space_spec(const json& spec) { return parse_space(spec, ""); }

json to_spec(const AbsoluteNorm& norm) {
  switch (norm.kind()) {
    case AbsoluteNorm::Kind::kP:
      return {{"type", "p"}, {"p", exponent_json(norm.exponent())}};
    case AbsoluteNorm::Kind::kPolygonal: {
      json vertices = json::array();
      for (const Point2& v : norm.vertices()) vertices.push_back({v.a, v.b});
      return {{"type", "polygon"}, {"vertices", vertices}};
    }
    case AbsoluteNorm::Kind::kSwapped:
      return {{"type", "swap"}, {"inner", to_spec(norm.inner())}};
    case AbsoluteNorm::Kind::kDual:
      return {{"type", "dual"}, {"inner", to_spec(norm.inner())},
              {"resolution", norm.resolution()}};
  }
  return nullptr;
}

json to_spec(const FiniteSpace& space) {
  switch (space.kind()) {
    case FiniteSpace::Kind::kP:
      return {{"type", "p"}, {"p", exponent_json(space.exponent())}, {"dim", space.dim()}};
    case FiniteSpace::Kind::kPolyhedral:
      return {{"type", "polyhedral"}, {"functionals", space.functionals()}};
    case FiniteSpace::Kind::kSum:
      return {{"type", "fsum"},
              {"left", to_spec(space.left())},
              {"right", to_spec(space.right())},
              {"F", to_spec(space.outer())}};
    case FiniteSpace::Kind::kMapped: {
      const int n = space.dim();
      json rows = json::array();
      for (int i = 0; i < n; ++i) {
        json row = json::array();
        for (int j = 0; j < n; ++j) row.push_back(space.inverse()[i * n + j]);
        rows.push_back(row);
      }
      return {{"type", "mapped"}, {"inner", to_spec(space.inner())}, {"inverse", rows}};
    }
  }
  return nullptr;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
}

AbsoluteNorm load_norm_spec(const std::string& path) {
  const json spec = read_json_file(path);
  try {
    return parse_norm_spec(spec);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

FiniteSpace load_space_spec(const std::string& path) {
  const json spec = read_json_file(path);
  try {
    return parse_space_spec(spec);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

}  // namespace absnorm

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "absnorm/norm2.hpp"
#include "absnorm/space.hpp"

namespace absnorm {

/// Norm spec: {"type":"p","p":2} | {"type":"p","p":"inf"} |
/// {"type":"polygon","vertices":[[1,0],...,[0,1]]} | {"type":"swap","inner":...}
/// | {"type":"dual","inner":...,"resolution":N}.
/// Errors are kParse (or the constructor's code) and name the field path.
AbsoluteNorm parse_norm_spec(const nlohmann::json& spec);

/// Space spec: {"type":"p","p":...,"dim":n} | {"type":"polyhedral","functionals":[[...]]}
/// | {"type":"fsum","left":...,"right":...,"F":<norm spec>}
/// | {"type":"mapped","inner":...,"matrix":[[...]]}  (pushforward by matrix).
FiniteSpace parse_space_spec(const nlohmann::json& spec);

nlohmann::json to_spec(const AbsoluteNorm& norm);
nlohmann::json to_spec(const FiniteSpace& space);

/// Reads and parses a JSON file; syntax errors carry the parser's position.
nlohmann::json read_json_file(const std::string& path);

AbsoluteNorm load_norm_spec(const std::string& path);
FiniteSpace load_space_spec(const std::string& path);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace absnorm

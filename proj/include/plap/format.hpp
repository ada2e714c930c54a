#pragma once

#include <string>

#include <json.hpp>

namespace plap {

/// printf-style %.{digits}g; non-finite values print as inf, -inf, nan.
std::string format_real(double x, int digits);

/// Serializes JSON with every floating value at 17 significant digits (lossless round trip).
/// Non-finite numbers become the strings "inf", "-inf", "nan". Object keys keep insertion
/// order when `j` is an ordered_json.
std::string dump_json17(const nlohmann::ordered_json& j, int indent = 2);

}  // namespace plap

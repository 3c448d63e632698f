#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace steer {

/// Serializes `value` in the canonical form used for every stored and
/// transmitted document: keys sorted, no whitespace, floating-point numbers
/// printed with 17 significant digits. Non-finite doubles are written as the
/// strings "+inf", "-inf" and "nan".
std::string canonical_dump(const nlohmann::json& value);

/// Lower-case hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

/// Formats a double with 17 significant digits ("%.17g").
std::string format_real(double value);

/// Reads a JSON number that may have been written as a non-finite sentinel.
double read_real(const nlohmann::json& value);

}  // namespace steer

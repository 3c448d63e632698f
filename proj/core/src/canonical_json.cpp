#include "steer/canonical_json.hpp"

#include <array>
#include <cmath>
#include <cstdio>

#include <openssl/evp.h>

#include "steer/error.hpp"

namespace steer {
namespace {

void write_string(std::string& out, const std::string& s) {
  // nlohmann's dump of a bare string produces correct JSON escaping.
  out += nlohmann::json(s).dump();
}

void write_value(std::string& out, const nlohmann::json& v) {
  using value_t = nlohmann::json::value_t;
  switch (v.type()) {
    case value_t::null: out += "null"; break;
    case value_t::boolean: out += v.get<bool>() ? "true" : "false"; break;
    case value_t::number_integer: out += std::to_string(v.get<std::int64_t>()); break;
    case value_t::number_unsigned: out += std::to_string(v.get<std::uint64_t>()); break;
    case value_t::number_float: {
      const double d = v.get<double>();
      if (std::isfinite(d)) {
        out += format_real(d);
      } else {
        write_string(out, std::isnan(d) ? "nan" : (d > 0 ? "+inf" : "-inf"));
      }
      break;
    }
    case value_t::string: write_string(out, v.get_ref<const std::string&>()); break;
    case value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += ',';
        first = false;
        write_value(out, item);
      }
      out += ']';
      break;
    }
    case value_t::object: {
      // nlohmann::json objects are std::map backed, so iteration is sorted.
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        write_string(out, it.key());
        out += ':';
        write_value(out, it.value());
      }
      out += '}';
      break;
    }
    default:
      throw Error(ErrorCode::Internal, "unsupported JSON value in canonical_dump");
  }
}

}  // namespace

std::string format_real(double value) {
  std::array<char, 40> buf{};
  const int n = std::snprintf(buf.data(), buf.size(), "%.17g", value);
  std::string s(buf.data(), static_cast<std::size_t>(n));
  if (s == "-0") s = "0";
  return s;
}

std::string canonical_dump(const nlohmann::json& value) {
  std::string out;
  write_value(out, value);
  return out;
}

double read_real(const nlohmann::json& value) {
  if (value.is_string()) {
    const auto& s = value.get_ref<const std::string&>();
    if (s == "+inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
    throw Error(ErrorCode::InvalidRequest, "expected a number, got string '" + s + "'");
  }
  return value.get<double>();
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::Internal, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[md[i] >> 4];
    hex += kHex[md[i] & 0xF];
  }
  return hex;
}

}  // namespace steer

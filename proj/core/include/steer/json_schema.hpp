#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace steer {

/// Text of a schema compiled in from schemas/<name>.schema.json.
std::optional<std::string_view> embedded_schema(std::string_view name) noexcept;
std::vector<std::string_view> embedded_schema_names();

struct SchemaViolation {
  /// JSON pointer into the document.
  std::string instance_path;
  std::string keyword;
  std::string message;
};

/// Validates `doc` against the named embedded schema. Returns the first
/// violation, or nothing when the document conforms. Throws Internal for an
/// unknown schema name.
std::optional<SchemaViolation> validate_against(std::string_view schema_name, const nlohmann::json& doc);

/// Same, against schema text supplied by the caller.
std::optional<SchemaViolation> validate_against_text(std::string_view schema_text, const nlohmann::json& doc);

/// Throws InvalidRequest with the violation as details.
void require_valid(std::string_view schema_name, const nlohmann::json& doc);

}  // namespace steer

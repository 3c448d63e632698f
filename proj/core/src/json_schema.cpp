#include "steer/json_schema.hpp"

#include <map>
#include <memory>
#include <mutex>

#include <rapidjson/document.h>
#include <rapidjson/error/en.h>
#include <rapidjson/schema.h>
#include <rapidjson/stringbuffer.h>

#include "steer/error.hpp"

namespace steer {

namespace {

std::unique_ptr<rapidjson::SchemaDocument> compile(std::string_view text) {
  rapidjson::Document sd;
  sd.Parse(text.data(), text.size());
  if (sd.HasParseError()) {
    throw Error(ErrorCode::Internal, std::string("schema does not parse: ") +
                                         rapidjson::GetParseError_En(sd.GetParseError()));
  }
  return std::make_unique<rapidjson::SchemaDocument>(sd);
}

const rapidjson::SchemaDocument& cached(std::string_view name) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<rapidjson::SchemaDocument>, std::less<>> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(name); it != cache.end()) return *it->second;
  const auto text = embedded_schema(name);
  if (!text) throw Error(ErrorCode::Internal, "no schema named '" + std::string(name) + "'");
  return *cache.emplace(std::string(name), compile(*text)).first->second;
}

std::optional<SchemaViolation> run(const rapidjson::SchemaDocument& schema, const nlohmann::json& doc) {
  const std::string text = doc.dump();
  rapidjson::Document d;
  d.Parse(text.data(), text.size());
  if (d.HasParseError()) {
    return SchemaViolation{"", "parse", rapidjson::GetParseError_En(d.GetParseError())};
  }
  rapidjson::SchemaValidator validator(schema);
  if (d.Accept(validator)) return std::nullopt;

  rapidjson::StringBuffer where;
  validator.GetInvalidDocumentPointer().StringifyUriFragment(where);
  rapidjson::StringBuffer rule;
  validator.GetInvalidSchemaPointer().StringifyUriFragment(rule);
  SchemaViolation v;
  v.instance_path = where.GetString();
  v.keyword = validator.GetInvalidSchemaKeyword();
  v.message = "value at '" + v.instance_path + "' violates '" + v.keyword + "' (schema " + rule.GetString() + ")";
  return v;
}

}  // namespace

std::optional<SchemaViolation> validate_against(std::string_view schema_name, const nlohmann::json& doc) {
  return run(cached(schema_name), doc);
}

std::optional<SchemaViolation> validate_against_text(std::string_view schema_text, const nlohmann::json& doc) {
  return run(*compile(schema_text), doc);
}

void require_valid(std::string_view schema_name, const nlohmann::json& doc) {
  if (auto v = validate_against(schema_name, doc)) {
    throw Error(ErrorCode::InvalidRequest, v->message,
                {{"schema", std::string(schema_name)}, {"path", v->instance_path}, {"keyword", v->keyword}});
  }
}

}  // namespace steer

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace cbflab::testing {

// Minimal structural validator for the subset of JSON Schema the published
// schemas use: type, required, properties, items, minItems, maxItems, enum.
inline void schema_errors(const nlohmann::json& value, const nlohmann::json& schema,
                          const std::string& path, std::vector<std::string>& errors) {
  using nlohmann::json;

  if (schema.contains("type")) {
    const std::string t = schema["type"].get<std::string>();
    bool ok = (t == "object" && value.is_object()) || (t == "array" && value.is_array()) ||
              (t == "string" && value.is_string()) || (t == "boolean" && value.is_boolean()) ||
              (t == "number" && value.is_number()) ||
              (t == "integer" && value.is_number_integer());
    if (!ok) {
      errors.push_back(path + ": expected type " + t);
      return;
    }
  }

  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& candidate : schema["enum"])
      if (candidate == value) found = true;
    if (!found) errors.push_back(path + ": value not in enum");
  }

  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema["required"])
        if (!value.contains(key.get<std::string>()))
          errors.push_back(path + ": missing required key " + key.get<std::string>());
    }
    if (schema.contains("properties")) {
      for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it) {
        if (value.contains(it.key()))
          schema_errors(value[it.key()], it.value(), path + "." + it.key(), errors);
      }
    }
  }

  if (value.is_array()) {
    if (schema.contains("minItems") && value.size() < schema["minItems"].get<size_t>())
      errors.push_back(path + ": too few items");
    if (schema.contains("maxItems") && value.size() > schema["maxItems"].get<size_t>())
      errors.push_back(path + ": too many items");
    if (schema.contains("items")) {
      size_t i = 0;
      for (const auto& item : value)
        schema_errors(item, schema["items"], path + "[" + std::to_string(i++) + "]", errors);
    }
  }
}

inline std::vector<std::string> validate_against_schema(const nlohmann::json& value,
                                                        const nlohmann::json& schema) {
  std::vector<std::string> errors;
  schema_errors(value, schema, "$", errors);
  return errors;
}

}  // namespace cbflab::testing

#pragma once

// Minimal draft-07 validator for the keywords report.schema.json uses:
// type (string or list), enum, required, properties, additionalProperties
// (bool or schema), items, minItems, maxItems, minimum. Test-only.

#include <string>
#include <vector>

#include <json.hpp>

namespace testing_schema {

using nlohmann::json;

inline bool type_matches(const json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  if (t == "integer") return v.is_number_integer() || (v.is_number_float() && v.get<double>() == static_cast<double>(static_cast<long long>(v.get<double>())));
  if (t == "number") return v.is_number();
  return false;
}

inline void validate(const json& v, const json& s, const std::string& path, std::vector<std::string>& errors) {
  if (s.is_boolean()) {
    if (!s.get<bool>()) errors.push_back(path + ": not allowed");
    return;
  }
  if (s.contains("type")) {
    bool ok = false;
    if (s["type"].is_array()) {
      for (const auto& t : s["type"]) ok = ok || type_matches(v, t.get<std::string>());
    } else {
      ok = type_matches(v, s["type"].get<std::string>());
    }
    if (!ok) {
      errors.push_back(path + ": expected type " + s["type"].dump() + ", got " + v.dump());
      return;
    }
  }
  if (s.contains("enum")) {
    bool found = false;
    for (const auto& e : s["enum"]) found = found || e == v;
    if (!found) errors.push_back(path + ": " + v.dump() + " not in enum");
  }
  if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>()) {
    errors.push_back(path + ": below minimum");
  }
  if (v.is_object()) {
    if (s.contains("required")) {
      for (const auto& k : s["required"]) {
        if (!v.contains(k.get<std::string>())) errors.push_back(path + ": missing " + k.get<std::string>());
      }
    }
    const json props = s.value("properties", json::object());
    for (const auto& [k, val] : v.items()) {
      if (props.contains(k)) {
        validate(val, props[k], path + "/" + k, errors);
      } else if (s.contains("additionalProperties")) {
        validate(val, s["additionalProperties"], path + "/" + k, errors);
      }
    }
  }
  if (v.is_array()) {
    if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) errors.push_back(path + ": too few items");
    if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>()) errors.push_back(path + ": too many items");
    if (s.contains("items")) {
      for (std::size_t i = 0; i < v.size(); ++i) validate(v[i], s["items"], path + "/" + std::to_string(i), errors);
    }
  }
}

inline std::vector<std::string> validate(const json& v, const json& schema) {
  std::vector<std::string> errors;
  validate(v, schema, "", errors);
  return errors;
}

}  // namespace testing_schema

#pragma once

// Internal helpers for reading JSON documents with field-path error messages.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cogsim/error.hpp"

namespace cogsim::detail {

using nlohmann::json;

[[noreturn]] inline void config_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ConfigError, path + ": " + what);
}

inline json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    config_error(what, std::string("invalid JSON: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) config_error(path, "expected object");
  auto it = obj.find(key);
  if (it == obj.end()) config_error(path + "." + key, "missing required field");
  return *it;
}

inline std::string get_string(const json& obj, const char* key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_string()) config_error(path + "." + key, "expected string");
  return v.get<std::string>();
}

inline double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) config_error(path, "expected number");
  return v.get<double>();
}

inline double get_number(const json& obj, const char* key, const std::string& path) {
  return get_number(require(obj, key, path), path + "." + key);
}

inline double get_number_or(const json& obj, const char* key, double fallback,
                            const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  return get_number(*it, path + "." + key);
}

inline std::int64_t get_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) config_error(path, "expected integer");
  return v.get<std::int64_t>();
}

inline std::int64_t get_int(const json& obj, const char* key, const std::string& path) {
  return get_int(require(obj, key, path), path + "." + key);
}

inline bool get_bool(const json& obj, const char* key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_boolean()) config_error(path + "." + key, "expected boolean");
  return v.get<bool>();
}

inline const json& get_array(const json& obj, const char* key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_array()) config_error(path + "." + key, "expected array");
  return v;
}

inline std::vector<std::string> get_strings(const json& obj, const char* key,
                                            const std::string& path) {
  const json& arr = get_array(obj, key, path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) {
      config_error(path + "." + key + "[" + std::to_string(i) + "]", "expected string");
    }
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

inline std::vector<std::string> get_strings_or_empty(const json& obj, const char* key,
                                                     const std::string& path) {
  if (!obj.contains(key)) return {};
  return get_strings(obj, key, path);
}

}  // namespace cogsim::detail

#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include <yaml-cpp/yaml.h>

#include "flatsat/errors.hpp"

// Small helpers for strict YAML documents: every mapping rejects unknown keys
// and conversion failures are reported as ConfigError with the offending path.
namespace flatsat::yaml {

inline void require_map(const YAML::Node& node, std::string_view where) {
  if (!node || !node.IsMap()) {
    throw ConfigError(std::string(where) + ": expected a mapping");
  }
}

inline void reject_unknown(const YAML::Node& node, std::string_view where,
                           std::initializer_list<std::string_view> allowed) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    bool known = false;
    for (const auto a : allowed) known = known || key == a;
    if (!known) {
      throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
T as(const YAML::Node& node, std::string_view key, std::string_view where) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(std::string(where) + "." + std::string(key) + ": invalid value");
  }
}

template <typename T>
T get(const YAML::Node& node, std::string_view key, std::string_view where) {
  const YAML::Node child = node[std::string(key)];
  if (!child) {
    throw ConfigError(std::string(where) + ": missing key '" + std::string(key) + "'");
  }
  return as<T>(child, key, where);
}

template <typename T>
T get_or(const YAML::Node& node, std::string_view key, T fallback, std::string_view where) {
  const YAML::Node child = node[std::string(key)];
  return child ? as<T>(child, key, where) : fallback;
}

inline YAML::Node child_map(const YAML::Node& node, std::string_view key, std::string_view where) {
  const YAML::Node child = node[std::string(key)];
  if (!child) {
    throw ConfigError(std::string(where) + ": missing section '" + std::string(key) + "'");
  }
  require_map(child, key);
  return child;
}

}  // namespace flatsat::yaml

#include "config.hpp"

#include <cmath>
#include <fstream>

namespace qmem::cli {

nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
}

Section::Section(const nlohmann::json& node, std::string path)
    : node_(node), path_(std::move(path)) {
  if (!node_.is_object()) {
    throw ConfigError((path_.empty() ? std::string("config") : path_) + " must be an object");
  }
}

std::string Section::name(const std::string& key) const {
  return path_.empty() ? key : path_ + "." + key;
}

bool Section::has(const std::string& key) const { return node_.contains(key); }

const nlohmann::json& Section::require(const std::string& key) const {
  seen_.insert(key);
  auto it = node_.find(key);
  if (it == node_.end()) throw ConfigError("missing required key: " + name(key));
  return *it;
}

double Section::number(const std::string& key) const {
  const auto& v = require(key);
  if (!v.is_number()) throw ConfigError(name(key) + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(name(key) + " must be finite");
  return d;
}

double Section::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : (seen_.insert(key), fallback);
}

std::optional<double> Section::optional_number(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return number(key);
}

std::uint64_t Section::integer(const std::string& key) const {
  const auto& v = require(key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(name(key) + " must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

std::uint64_t Section::integer(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? integer(key) : (seen_.insert(key), fallback);
}

bool Section::boolean(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto& v = require(key);
  if (!v.is_boolean()) throw ConfigError(name(key) + " must be true or false");
  return v.get<bool>();
}

std::vector<double> Section::numbers(const std::string& key) const {
  const auto& v = require(key);
  if (!v.is_array()) throw ConfigError(name(key) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(name(key) + " must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::optional<std::vector<double>> Section::optional_numbers(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return numbers(key);
}

std::string Section::string(const std::string& key, const std::string& fallback) const {
  if (!has(key)) return fallback;
  const auto& v = require(key);
  if (!v.is_string()) throw ConfigError(name(key) + " must be a string");
  return v.get<std::string>();
}

Section Section::child(const std::string& key) const { return Section(require(key), name(key)); }

std::optional<Section> Section::optional_child(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return child(key);
}

std::vector<Section> Section::children(const std::string& key) const {
  const auto& v = require(key);
  if (!v.is_array()) throw ConfigError(name(key) + " must be an array of objects");
  std::vector<Section> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.emplace_back(v[i], name(key) + "[" + std::to_string(i) + "]");
  }
  return out;
}

void Section::finish() const {
  for (auto it = node_.begin(); it != node_.end(); ++it) {
    if (!seen_.count(it.key())) throw ConfigError("unknown key: " + name(it.key()));
  }
}

}  // namespace qmem::cli

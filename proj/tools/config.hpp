#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace qmem::cli {

/// Bad or incomplete run configuration (exit status 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json load_config(const std::string& path);

/// View over one JSON object that records which keys were read, so that
/// leftovers can be reported as unknown. `path` is used in messages,
/// e.g. "storage.k".
class Section {
 public:
  Section(const nlohmann::json& node, std::string path);

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  std::optional<double> optional_number(const std::string& key) const;
  std::uint64_t integer(const std::string& key) const;
  std::uint64_t integer(const std::string& key, std::uint64_t fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  std::optional<std::vector<double>> optional_numbers(const std::string& key) const;
  std::string string(const std::string& key, const std::string& fallback) const;

  bool has(const std::string& key) const;
  Section child(const std::string& key) const;
  std::optional<Section> optional_child(const std::string& key) const;
  std::vector<Section> children(const std::string& key) const;

  /// Throws ConfigError naming the first key that was never read.
  void finish() const;

  const std::string& path() const { return path_; }

 private:
  const nlohmann::json& require(const std::string& key) const;
  std::string name(const std::string& key) const;

  const nlohmann::json& node_;
  std::string path_;
  mutable std::set<std::string> seen_;
};

}  // namespace qmem::cli

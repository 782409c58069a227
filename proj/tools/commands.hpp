#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace qmem::cli {

/// File could not be written or read (exit status 1).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode : int { kOk = 0, kIoFailure = 1, kConfigFailure = 2, kNumericalFailure = 3 };

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;             // overrides the config's seed
  std::set<std::string> formats = {"csv", "json", "svg"};

  bool wants(const std::string& f) const { return formats.count(f) > 0; }
};

/// Paths of the files a command wrote, in write order.
using Outputs = std::vector<std::filesystem::path>;

Outputs cmd_store(const nlohmann::json& config, const RunOptions& options);
Outputs cmd_fidelity(const nlohmann::json& config, const RunOptions& options);
Outputs cmd_calibrate(const nlohmann::json& config, const RunOptions& options);
Outputs cmd_microscopic(const nlohmann::json& config, const RunOptions& options);
Outputs cmd_lifetime(const nlohmann::json& config, const RunOptions& options);

const std::vector<std::string>& command_names();

/// Dispatches by name and maps failures to exit codes, writing a one-line
/// message to `err`. Written paths go to `log`.
int run_command(const std::string& name, const nlohmann::json& config, const RunOptions& options,
                std::ostream& log, std::ostream& err);

}  // namespace qmem::cli

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

int main(int argc, char** argv) {
  using namespace qmem::cli;
  CLI::App app{"qmem: measurement-feedback quantum memory simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::vector<std::string> formats;

  for (const auto& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "overrides the seed in the config");
    sub->add_option("--format", formats, "csv, json and/or svg (repeatable)")
        ->check(CLI::IsMember({"csv", "json", "svg"}))
        ->delimiter(',');
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigFailure;
  }

  RunOptions options;
  options.out_dir = out_dir;
  options.seed = seed;
  if (!formats.empty()) options.formats = {formats.begin(), formats.end()};

  nlohmann::json config;
  try {
    config = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigFailure;
  }
  return run_command(app.get_subcommands().front()->get_name(), config, options, std::cout,
                     std::cerr);
}

#include "fidcorr/cli/config.hpp"
#include "fidcorr/cli/runner.hpp"
#include "fidcorr/error.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
  using namespace fidcorr;
  CLI::App app{"FID and pair-correlation experiments for dipolar spin lattices"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string mode_override;
  auto* run = app.add_subcommand("run", "run one configuration file");
  run->add_option("config", config_path, "JSON run configuration")->required();
  run->add_option("--out", out_dir, "directory for CSV outputs");
  run->add_option("--mode", mode_override, "override the configured mode");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? 0 : exit_code(ErrorKind::config);
  }

  cli::RunConfig config;
  try {
    std::ifstream in(config_path);
    if (!in) throw Error(ErrorKind::config, "cannot read " + config_path);
    std::ostringstream text;
    text << in.rdbuf();
    config = cli::validate_config(text.str());
    if (!mode_override.empty()) {
      const auto mode = cli::parse_mode(mode_override);
      if (!mode) throw Error(ErrorKind::config, "--mode: unknown mode '" + mode_override + "'");
      config.mode = *mode;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  }
  return cli::run(config, out_dir, std::cout, std::cerr);
}

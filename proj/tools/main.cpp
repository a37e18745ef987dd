#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spectral and pseudospectral functions of symmetric systems"};
  app.require_subcommand(1);
  std::string config;
  std::string out;
  for (const char* name : {"validate", "sample-m", "invert", "fourier", "resolvent-check", "report"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON run configuration")->required();
    sub->add_option("--out", out, "output directory (default: config 'output' or .)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : specfun::cli::kUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  std::optional<std::filesystem::path> out_dir;
  if (!out.empty()) out_dir = out;
  return specfun::cli::run_command(command, config, out_dir, std::cerr);
}

#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "decaylab/commands.hpp"
#include "decaylab/errors.hpp"

#ifndef DECAYLAB_CONFIG_DIR
#define DECAYLAB_CONFIG_DIR "config"
#endif

namespace fs = std::filesystem;
using namespace decaylab;

namespace {

// Looks next to the working directory first, then in the installed config directory.
std::string resolve_config(const std::string& path) {
  if (fs::exists(path)) return path;
  const fs::path alt = fs::path(DECAYLAB_CONFIG_DIR) / fs::path(path).filename();
  if (fs::exists(alt)) return alt.string();
  throw ConfigError("config file not found: " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decay-lab: numerical checks of heat and Navier-Stokes decay estimates"};
  app.allow_extras();
  std::string command;
  std::string config_path = (fs::path(DECAYLAB_CONFIG_DIR) / "reference.cfg").string();
  std::string budgets_path;
  std::string out_dir = "results";
  bool list = false;
  std::string names = "all";
  for (const auto& info : commands::registry()) names += ", " + info.name;
  app.add_option("command", command, "one of: " + names);
  app.add_option("--config", config_path, "key = value configuration file")->capture_default_str();
  app.add_option("--budgets", budgets_path, "budget file (default: budgets.cfg beside the config)");
  app.add_option("--out", out_dir, "output directory for JSON, CSV and summary.tsv")->capture_default_str();
  app.add_flag("--list", list, "list commands and exit");
  app.footer("Any further --key=value token overrides a configuration entry.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : commands::kConfigError;
  }

  if (list) {
    std::printf("%-22s %s\n", "all", "every command below in order");
    for (const auto& info : commands::registry()) std::printf("%-22s %s\n", info.name.c_str(), info.summary.c_str());
    return 0;
  }
  if (command.empty()) {
    std::fprintf(stderr, "%s", app.help().c_str());
    return commands::kConfigError;
  }

  try {
    const std::string cfg_file = resolve_config(config_path);
    Config cfg = Config::load(cfg_file);
    cfg.apply_overrides(app.remaining());
    if (budgets_path.empty()) budgets_path = (fs::path(cfg_file).parent_path() / "budgets.cfg").string();
    const Config budgets = Config::load(resolve_config(budgets_path));
    fs::create_directories(out_dir);
    const int rc = commands::run_command(command, cfg, budgets, out_dir);
    std::printf("%s: exit %d, summary in %s\n", command.c_str(), rc, (fs::path(out_dir) / "summary.tsv").c_str());
    return rc;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return commands::kConfigError;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return commands::kNonConvergence;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid parameters: %s\n", e.what());
    return commands::kConfigError;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "invalid parameters: %s\n", e.what());
    return commands::kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return commands::kCheckFailure;
  }
}

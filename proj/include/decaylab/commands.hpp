#pragma once

#include <string>
#include <vector>

#include "decaylab/config.hpp"
#include "decaylab/report.hpp"

/// The check suites behind the decay-lab commands. Every suite reads its parameters from a
/// flat Config (defaults documented in config/reference.cfg) and budgets from a second Config
/// keyed by check id.
namespace decaylab::commands {

enum ExitCode : int {
  kPass = 0,
  kCheckFailure = 1,
  kNonConvergence = 2,
  kConfigError = 64,
};

struct CommandOutput {
  std::vector<CheckResult> checks;
  bool non_convergence = false;
  std::string note;  // human-readable hint, e.g. after a non-contracting run
  int exit_code() const;
};

/// out_dir receives CSV series when non-empty.
using CommandFn = CommandOutput (*)(const Config& cfg, const Config& budgets, const std::string& out_dir);

struct CommandInfo {
  std::string name;
  std::string summary;
  CommandFn fn;
};

/// In dependency order; `all` runs them in this order.
const std::vector<CommandInfo>& registry();

CommandOutput verify_kernels(const Config& cfg, const Config& budgets, const std::string& out_dir);
CommandOutput heat_decay(const Config& cfg, const Config& budgets, const std::string& out_dir);
CommandOutput gradient_decay(const Config& cfg, const Config& budgets, const std::string& out_dir);
CommandOutput certify_inequalities(const Config& cfg, const Config& budgets, const std::string& out_dir);
CommandOutput representation_check(const Config& cfg, const Config& budgets, const std::string& out_dir);
CommandOutput navier_stokes(const Config& cfg, const Config& budgets, const std::string& out_dir);

/// Runs one command (or `all`), writes `<name>.json` and `summary.tsv` under out_dir and returns
/// the process exit code. ConfigError maps to 64.
int run_command(const std::string& name, const Config& cfg, const Config& budgets, const std::string& out_dir);

/// Budget for a check id; ConfigError if absent and no fallback is given.
double budget_for(const Config& budgets, const std::string& id);

}  // namespace decaylab::commands

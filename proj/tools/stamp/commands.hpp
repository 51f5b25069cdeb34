#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stamp/cli/run.hpp"

namespace stamp::cli {

inline constexpr int kExitComplete = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitPartial = 2;

/// Runs the anytime planner and writes anytime.csv and policy.json to
/// config.out_dir. Returns 0 when all mass is refined, 2 on a partial result
/// and 1 when the problem cannot be loaded or solved.
int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err);

struct SimulateConfig {
  RunConfig run;
  std::string policy_path;
  int episodes = 1000;
  std::optional<int> snapshot;
};

int cmd_simulate(const SimulateConfig& config, std::ostream& out, std::ostream& err);

int cmd_report(const std::vector<std::string>& csv_paths, const std::optional<std::string>& plot_data,
               std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to the subcommands.
int run_cli(int argc, char** argv);

} // namespace stamp::cli

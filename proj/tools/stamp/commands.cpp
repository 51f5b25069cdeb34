#include "stamp/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "stamp/domains/spec.hpp"
#include "stamp/ssp/value_iteration.hpp"

namespace stamp::cli {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError("cannot write " + path.string());
  out << text;
}

void configure_logging() {
  const char* level = std::getenv("STAMP_LOG");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
  spdlog::set_pattern("[%l] %v");
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, std::string> params;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw CliError("builtin parameter '" + item + "' is not key=value");
    params[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return params;
}

} // namespace

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (!(config.deadline_s >= 0.0)) {
    err << "error: deadline must be nonnegative\n";
    return kExitFailure;
  }
  std::optional<domains::StamppProblem> problem;
  try {
    problem = load_problem(config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  spdlog::info("loaded domain '{}' with {} grounded actions", problem->spec.name,
               problem->abstract_model.actions().size());

  refine::AtmResult result;
  try {
    result = refine::atm_mdp(*problem, config.atm_options());
  } catch (const ssp::ModelError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  spdlog::info("{} iterations, {} PRG nodes, {} work units", result.stats.iterations, result.prg.size(),
               result.work.units());

  try {
    fs::create_directories(config.out_dir);
    write_file(fs::path(config.out_dir) / "anytime.csv", write_csv(csv_rows(result)));
    write_file(fs::path(config.out_dir) / "policy.json", policy_to_json(make_policy(*problem, result)).dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }

  char line[256];
  std::snprintf(line, sizeof line, "prob_mass_refined=%.6f snapshots=%zu prg_nodes=%zu work_units=%lld\n",
                result.mass, result.snapshots.size(), result.prg.size(), result.work.units());
  out << line;
  return result.complete ? kExitComplete : kExitPartial;
}

int cmd_simulate(const SimulateConfig& config, std::ostream& out, std::ostream& err) {
  try {
    auto problem = load_problem(config.run);
    auto policy = policy_from_json(nlohmann::json::parse(read_file(config.policy_path)));
    check_consistent(policy, problem);
    if (config.snapshot && (*config.snapshot < 0 || *config.snapshot >= policy.snapshots)) {
      throw CliError("snapshot " + std::to_string(*config.snapshot) + " out of range");
    }
    auto report = simulate(policy, config.episodes, config.run.seed, config.snapshot);
    out << report.to_json().dump(2) << "\n";
    return kExitComplete;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed policy: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitFailure;
}

int cmd_report(const std::vector<std::string>& csv_paths, const std::optional<std::string>& plot_data,
               std::ostream& out, std::ostream& err) {
  try {
    std::vector<RunSummary> runs;
    std::string plot = "run,elapsed_s,prob_mass_refined\n";
    for (const auto& path : csv_paths) {
      auto rows = parse_csv(read_file(path));
      runs.push_back(summarize(path, rows));
      char buf[512];
      std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f\n", path.c_str(), 0.0, 0.0);
      plot += buf;
      for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f\n", path.c_str(), r.elapsed_s, r.mass);
        plot += buf;
      }
    }
    out << format_report(aggregate(std::move(runs)));
    if (plot_data) write_file(*plot_data, plot);
    return kExitComplete;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int run_cli(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Anytime stochastic task and motion planner"};
  app.require_subcommand(1);

  RunConfig run;
  std::vector<std::string> builtin;
  auto add_domain = [&](CLI::App* cmd) {
    auto* d = cmd->add_option("--domain", run.domain_path, "Domain JSON file");
    auto* b = cmd->add_option("--builtin", builtin, "Builtin generator: NAME [key=value ...]")->expected(1, -1);
    d->excludes(b);
    cmd->add_option("--seed", run.seed, "Random seed");
  };

  auto* solve = app.add_subcommand("solve", "Refine a policy anytime; writes anytime.csv and policy.json");
  add_domain(solve);
  solve->add_option("--deadline-s", run.deadline_s, "Deadline in seconds");
  solve->add_option("--explore-prob", run.explore_prob, "Probability of exploring a random action")
      ->check(CLI::Range(0.0, 1.0));
  solve->add_option("--horizon-cap", run.horizon_cap, "Largest horizon tried")->check(CLI::PositiveNumber);
  solve->add_option("--out-dir", run.out_dir, "Output directory");
  solve->add_flag("--virtual-clock", run.virtual_clock, "Measure time in work units");
  solve->add_option("--seconds-per-unit", run.seconds_per_unit, "Virtual seconds per work unit");

  SimulateConfig sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Execute a policy under sampled outcomes");
  add_domain(simulate_cmd);
  simulate_cmd->add_option("--policy", sim.policy_path, "policy.json from solve")->required();
  simulate_cmd->add_option("--episodes", sim.episodes, "Number of episodes")->check(CLI::NonNegativeNumber);
  simulate_cmd->add_option("--snapshot", sim.snapshot, "Only leaves refined by this snapshot count");

  std::vector<std::string> csvs;
  std::optional<std::string> plot;
  auto* report = app.add_subcommand("report", "Summarize anytime curves");
  report->add_option("csv", csvs, "anytime.csv files")->required();
  report->add_option("--plot-data", plot, "Write merged curve data here");

  try {
    app.parse(argc, argv);
    if (!builtin.empty()) {
      run.builtin = builtin.front();
      run.builtin_params = parse_params({builtin.begin() + 1, builtin.end()});
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitFailure;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }

  if (solve->parsed()) return cmd_solve(run, std::cout, std::cerr);
  if (simulate_cmd->parsed()) {
    sim.run = run;
    return cmd_simulate(sim, std::cout, std::cerr);
  }
  return cmd_report(csvs, plot, std::cout, std::cerr);
}

} // namespace stamp::cli

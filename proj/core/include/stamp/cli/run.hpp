#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stamp/domains/problem.hpp"
#include "stamp/refine/atm_mdp.hpp"

namespace stamp::cli {

class CliError : public Error {
public:
  using Error::Error;
};

struct RunConfig {
  std::optional<std::string> domain_path;
  std::optional<std::string> builtin;
  std::map<std::string, std::string> builtin_params;
  std::uint64_t seed = 0;
  double deadline_s = 60.0;
  double explore_prob = 0.0;
  int horizon_cap = ssp::kDefaultHorizonCap;
  std::string out_dir = ".";
  bool virtual_clock = false;
  double seconds_per_unit = 1e-3;

  refine::AtmOptions atm_options() const;
};

/// Loads the domain named by the config. Throws DomainError or CliError.
domains::StamppProblem load_problem(const RunConfig& config);

// ---- anytime.csv

struct CsvRow {
  double elapsed_s = 0.0;
  long long work_units = 0;
  int paths_refined = 0;
  double mass = 0.0;
};

inline constexpr const char* kCsvHeader = "elapsed_s,work_units,paths_refined,prob_mass_refined";

std::vector<CsvRow> csv_rows(const refine::AtmResult& result);
std::string write_csv(const std::vector<CsvRow>& rows);
/// Throws CliError naming the offending line.
std::vector<CsvRow> parse_csv(const std::string& text);

// ---- policy.json

struct PolicyEdge {
  int outcome = 0;
  double probability = 0.0;
  std::string label;
  std::uint64_t child = 0;
};

struct PolicyVertex {
  std::uint64_t id = 0;
  int t = 0;
  std::string leaf;
  std::optional<std::string> schema;
  std::vector<std::pair<std::string, std::string>> bindings;
  double cost = 0.0;
  std::vector<PolicyEdge> children;
  /// Snapshot index from which the leaf counts as refined; -1 if never.
  int refined_since = -1;
  nlohmann::json values;
  nlohmann::json world;
  std::string state;
};

struct Policy {
  std::string domain;
  std::uint64_t root = 0;
  std::map<std::uint64_t, PolicyVertex> vertices;
  int snapshots = 0;
  double mass = 0.0;
};

/// The node's tree; leaves in `refined` map to their first snapshot index.
Policy make_policy(const domains::StamppProblem& problem, const refine::PrgNode& node,
                   const std::map<ssp::VertexId, int>& refined, int snapshots);
/// Policy of the best node, with refined_since taken from the run's snapshots.
Policy make_policy(const domains::StamppProblem& problem, const refine::AtmResult& result);
/// The node recorded in one snapshot; every leaf it covers has refined_since 0.
Policy make_policy(const domains::StamppProblem& problem, const refine::AtmResult& result,
                   const refine::Snapshot& snapshot);

nlohmann::json policy_to_json(const Policy& policy);
Policy policy_from_json(const nlohmann::json& json);

// ---- simulation

enum class EpisodeOutcome { ReachedGoal, Unresolved, HorizonExhausted };
const char* to_string(EpisodeOutcome outcome);

struct Episode {
  EpisodeOutcome outcome = EpisodeOutcome::ReachedGoal;
  double cost = 0.0;
  /// Vertex where execution stopped.
  std::uint64_t vertex = 0;
};

struct ExecutionReport {
  int episodes = 0;
  int reached_goal = 0;
  int unresolved = 0;
  int horizon_exhausted = 0;
  double unresolved_rate = 0.0;
  double mean_cost = 0.0;
  /// schema -> outcome label -> times sampled.
  std::map<std::string, std::map<std::string, int>> outcome_counts;
  std::vector<Episode> records;

  nlohmann::json to_json() const;
};

/// Samples outcomes by their declared probabilities and follows the tree.
/// With `snapshot`, leaves refined after that snapshot count as unresolved.
ExecutionReport simulate(const Policy& policy, int episodes, std::uint64_t seed,
                         std::optional<int> snapshot = std::nullopt);

/// Throws CliError when the policy names actions or entities the domain lacks.
void check_consistent(const Policy& policy, const domains::StamppProblem& problem);

// ---- report

struct RunSummary {
  std::string name;
  double total_s = 0.0;
  /// nullopt when the curve never reaches 80%.
  std::optional<double> t80_s;
  double fraction = 0.0;
  double final_mass = 0.0;
};

struct Report {
  std::vector<RunSummary> runs;
  double median_total_s = 0.0;
  std::optional<double> median_t80_s;
  std::optional<double> median_fraction;
};

/// Time to 80% refined mass and its fraction of the total, measured from t = 0.
RunSummary summarize(const std::string& name, const std::vector<CsvRow>& rows);
Report aggregate(std::vector<RunSummary> runs);
std::string format_report(const Report& report);

double median(std::vector<double> values);

} // namespace stamp::cli

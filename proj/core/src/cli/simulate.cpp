#include "stamp/cli/run.hpp"
#include "stamp/common/rng.hpp"

namespace stamp::cli {

const char* to_string(EpisodeOutcome outcome) {
  switch (outcome) {
    case EpisodeOutcome::ReachedGoal: return "reached_goal";
    case EpisodeOutcome::Unresolved: return "unresolved_contingency";
    case EpisodeOutcome::HorizonExhausted: return "horizon_exhausted";
  }
  return "unresolved_contingency";
}

nlohmann::json ExecutionReport::to_json() const {
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [schema, labels] : outcome_counts) {
    for (const auto& [label, n] : labels) counts[schema][label] = n;
  }
  return {{"episodes", episodes},
          {"reached_goal", reached_goal},
          {"unresolved_contingency", unresolved},
          {"horizon_exhausted", horizon_exhausted},
          {"unresolved_rate", unresolved_rate},
          {"mean_cost", mean_cost},
          {"outcome_counts", counts}};
}

ExecutionReport simulate(const Policy& policy, int episodes, std::uint64_t seed, std::optional<int> snapshot) {
  if (episodes < 0) throw CliError("episode count must be nonnegative");
  ExecutionReport report;
  report.episodes = episodes;
  Rng rng(seed);
  double total_cost = 0.0;
  for (int e = 0; e < episodes; ++e) {
    Episode ep;
    std::uint64_t v = policy.root;
    while (true) {
      const auto& vx = policy.vertices.at(v);
      if (vx.children.empty()) {
        bool resolved = vx.refined_since >= 0 && (!snapshot || vx.refined_since <= *snapshot);
        if (!resolved) {
          ep.outcome = EpisodeOutcome::Unresolved;
        } else {
          ep.outcome = vx.leaf == "goal" ? EpisodeOutcome::ReachedGoal : EpisodeOutcome::HorizonExhausted;
        }
        break;
      }
      if (vx.values.is_null()) {
        ep.outcome = EpisodeOutcome::Unresolved;
        break;
      }
      const double u = rng.uniform();
      double acc = 0.0;
      const PolicyEdge* pick = &vx.children.back();
      for (const auto& edge : vx.children) {
        acc += edge.probability;
        if (u < acc) {
          pick = &edge;
          break;
        }
      }
      ++report.outcome_counts[*vx.schema][pick->label];
      ep.cost += vx.cost;
      v = pick->child;
    }
    ep.vertex = v;
    switch (ep.outcome) {
      case EpisodeOutcome::ReachedGoal: ++report.reached_goal; break;
      case EpisodeOutcome::Unresolved: ++report.unresolved; break;
      case EpisodeOutcome::HorizonExhausted: ++report.horizon_exhausted; break;
    }
    total_cost += ep.cost;
    report.records.push_back(ep);
  }
  if (episodes > 0) {
    report.unresolved_rate = static_cast<double>(report.unresolved) / episodes;
    report.mean_cost = total_cost / episodes;
  }
  return report;
}

} // namespace stamp::cli

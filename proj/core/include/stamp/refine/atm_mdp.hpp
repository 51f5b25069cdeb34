#pragma once

#include <cstdint>
#include <limits>
#include <set>
#include <vector>

#include "stamp/anytime/anytime.hpp"
#include "stamp/refine/concretize.hpp"

namespace stamp::refine {

struct AtmOptions {
  double deadline_s = 60.0;
  /// Work budget in units (samples + planner iterations); unlimited by default.
  long long work_budget = std::numeric_limits<long long>::max();
  double explore_prob = 0.0;
  /// Probability of choosing UpdateAbstraction over Concretization.
  double compute_prob = 0.5;
  /// Measure time in work units instead of wall-clock seconds.
  bool virtual_clock = false;
  double seconds_per_unit = 1e-3;
  int horizon_cap = ssp::kDefaultHorizonCap;
  std::uint64_t seed = 0;
  ResourceLimit limits;
};

struct Snapshot {
  int index = 0;
  double elapsed_s = 0.0;
  long long work_units = 0;
  int paths_refined = 0;
  double mass = 0.0;
  NodeId node = 0;
  std::set<VertexId> refined;
};

struct AtmStats {
  int iterations = 0;
  int concretizations = 0;
  int feasible = 0;
  int failed = 0;
  int exhausted = 0;
  int explored = 0;
  int updates = 0;
};

struct AtmResult {
  Prg prg;
  std::vector<Snapshot> snapshots;
  /// Node holding the most refined mass.
  NodeId best = 0;
  double mass = 0.0;
  bool complete = false;
  anytime::AnytimeCurve curve;
  domains::Work work;
  double elapsed_s = 0.0;
  AtmStats stats;
};

/// Interleaves concretization, abstraction updates and replanning until all
/// probability mass is refined or the deadline (or work budget) is reached.
AtmResult atm_mdp(const domains::StamppProblem& problem, const AtmOptions& options = {});

} // namespace stamp::refine

#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stamp/ssp/model.hpp"

namespace stamp::ssp {

class DeadEndError : public ModelError {
public:
  using ModelError::ModelError;
};

class HorizonCapError : public ModelError {
public:
  using ModelError::ModelError;
};

using StateId = std::size_t;

/// Interns states by their interpretations.
class StateTable {
public:
  StateId intern(const LogicalStructure& state);
  StateId intern(StatePtr state);
  std::optional<StateId> find(const LogicalStructure& state) const;
  const StatePtr& state(StateId id) const { return states_.at(id); }
  std::size_t size() const { return states_.size(); }

private:
  std::vector<StatePtr> states_;
  std::unordered_map<std::string, StateId> index_;
};

enum class DeadEnds {
  /// A reachable non-goal state with no applicable action is an error.
  Error,
  /// Such states get `dead_end_value`; the solver steers around them.
  Penalize,
};

struct SolveOptions {
  DeadEnds dead_ends = DeadEnds::Error;
  double dead_end_value = std::numeric_limits<double>::infinity();
};

/// Values V(s, t) and the nonstationary policy pi(s, t) on states reachable from s0.
struct Solution {
  StateTable states;
  int horizon = 0;
  /// Keyed by (state, t). Only reachable pairs are present.
  std::map<std::pair<StateId, int>, double> values;
  std::map<std::pair<StateId, int>, std::size_t> policy;
  /// States with no applicable action, found during the search.
  std::vector<StateId> dead_ends;

  double value(const LogicalStructure& state, int t) const;
  double initial_value() const;
  /// Index into model.actions(); nullopt at goals, horizon and dead ends.
  std::optional<std::size_t> action(const LogicalStructure& state, int t) const;
  std::optional<std::size_t> action(StateId state, int t) const;
};

Solution value_iteration(const SspModel& model, const SolveOptions& options = {});

/// Probability of reaching G within H steps under the solution's policy.
double goal_probability(const SspModel& model, const Solution& solution);

inline constexpr int kDefaultHorizonCap = 50;

/// Same model with H + step. Throws HorizonCapError when the result exceeds `cap`.
SspModel extend_horizon(const SspModel& model, int step = 1, int cap = kDefaultHorizonCap);

/// Solves, extending the horizon by one until the goal probability is positive.
std::pair<SspModel, Solution> solve_with_dynamic_horizon(SspModel model, const SolveOptions& options = {},
                                                         int cap = kDefaultHorizonCap);

} // namespace stamp::ssp

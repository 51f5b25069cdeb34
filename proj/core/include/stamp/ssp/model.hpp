#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "stamp/common/error.hpp"
#include "stamp/logic/formula.hpp"
#include "stamp/logic/structure.hpp"

namespace stamp::ssp {

using logic::LogicalStructure;
using StatePtr = std::shared_ptr<const LogicalStructure>;

class ModelError : public Error {
public:
  using Error::Error;
};

/// Sets `relation(args)` to `value`. An argument of the form `*sort` stands for
/// every entity of that sort (`*` alone: every entity).
struct Effect {
  std::string relation;
  std::vector<std::string> args;
  logic::Truth value = logic::Truth::True;

  std::string to_string() const;
};

struct Outcome {
  double probability = 1.0;
  std::vector<Effect> effects;
  std::string label;
};

struct GroundedAction {
  std::string schema;
  /// Parameter name to entity id, in declaration order. Symbolic arguments
  /// (trajectories, configurations) appear here like any other parameter.
  std::vector<std::pair<std::string, std::string>> bindings;
  logic::FormulaPtr precondition;
  std::vector<Outcome> outcomes;
  double cost = 1.0;

  /// "c=c1,t=traj_pick_c1"
  std::string serialized_bindings() const;
  /// "pickup(c=c1,t=traj_pick_c1)"
  std::string to_string() const;
  const std::string& binding(const std::string& param) const;
  bool has_binding(const std::string& param) const;
};

/// Orders actions for deterministic tie-breaking: schema, then bindings text.
bool action_less(const GroundedAction& a, const GroundedAction& b);

/// Applicable iff the precondition is not False. Unknown preconditions are
/// treated optimistically and resolved during concretization.
bool applicable(const GroundedAction& action, const LogicalStructure& state);

LogicalStructure apply_outcome(const LogicalStructure& state, const Outcome& outcome);

/// <S, A, T, C, gamma = 1, H, s0, G>; states are reached on demand from s0.
class SspModel {
public:
  SspModel(LogicalStructure initial, logic::FormulaPtr goal, int horizon,
           std::vector<GroundedAction> actions);

  const LogicalStructure& initial() const { return *initial_; }
  const StatePtr& initial_ptr() const { return initial_; }
  const logic::FormulaPtr& goal() const { return goal_; }
  int horizon() const { return horizon_; }
  const std::vector<GroundedAction>& actions() const { return *actions_; }

  bool is_goal(const LogicalStructure& state) const;
  /// Successor states of one action, in outcome order.
  std::vector<std::pair<LogicalStructure, double>> transition(const LogicalStructure& state,
                                                              const GroundedAction& action) const;

  SspModel with_initial(LogicalStructure initial) const;
  SspModel with_horizon(int horizon) const;

private:
  StatePtr initial_;
  logic::FormulaPtr goal_;
  int horizon_;
  std::shared_ptr<const std::vector<GroundedAction>> actions_;
};

} // namespace stamp::ssp

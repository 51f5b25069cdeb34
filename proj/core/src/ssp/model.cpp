#include "stamp/ssp/model.hpp"

#include <algorithm>
#include <cmath>

namespace stamp::ssp {

std::string Effect::to_string() const {
  std::string prefix = value == logic::Truth::True ? "" : value == logic::Truth::False ? "!" : "?";
  return prefix + logic::format_atom(relation, args);
}

std::string GroundedAction::serialized_bindings() const {
  std::string out;
  for (const auto& [param, value] : bindings) {
    if (!out.empty()) out += ',';
    out += param + '=' + value;
  }
  return out;
}

std::string GroundedAction::to_string() const { return schema + '(' + serialized_bindings() + ')'; }

const std::string& GroundedAction::binding(const std::string& param) const {
  for (const auto& [p, v] : bindings) {
    if (p == param) return v;
  }
  throw ModelError("action " + to_string() + " has no parameter '" + param + "'");
}

bool GroundedAction::has_binding(const std::string& param) const {
  return std::any_of(bindings.begin(), bindings.end(), [&](const auto& b) { return b.first == param; });
}

bool action_less(const GroundedAction& a, const GroundedAction& b) {
  if (a.schema != b.schema) return a.schema < b.schema;
  return a.serialized_bindings() < b.serialized_bindings();
}

bool applicable(const GroundedAction& action, const LogicalStructure& state) {
  if (!action.precondition) return true;
  return logic::evaluate(*action.precondition, state) != logic::Truth::False;
}

LogicalStructure apply_outcome(const LogicalStructure& state, const Outcome& outcome) {
  LogicalStructure next = state;
  for (const auto& effect : outcome.effects) {
    const auto* sym = state.vocabulary().relation(effect.relation);
    if (!sym) throw ModelError("effect on unknown relation '" + effect.relation + "'");
    std::vector<logic::Tuple> tuples{{}};
    for (std::size_t i = 0; i < effect.args.size(); ++i) {
      const auto& arg = effect.args[i];
      std::vector<logic::EntityId> choices;
      if (!arg.empty() && arg[0] == '*') {
        choices = state.entities_of_sort(arg.substr(1));
      } else {
        choices.push_back(arg);
      }
      std::vector<logic::Tuple> next_tuples;
      for (const auto& t : tuples) {
        for (const auto& c : choices) {
          auto u = t;
          u.push_back(c);
          next_tuples.push_back(std::move(u));
        }
      }
      tuples = std::move(next_tuples);
    }
    for (const auto& t : tuples) next.set(effect.relation, t, effect.value);
  }
  return next;
}

SspModel::SspModel(LogicalStructure initial, logic::FormulaPtr goal, int horizon,
                   std::vector<GroundedAction> actions)
    : initial_(std::make_shared<const LogicalStructure>(std::move(initial))),
      goal_(std::move(goal)),
      horizon_(horizon) {
  if (!goal_) throw ModelError("model has no goal formula");
  if (horizon_ < 0) throw ModelError("horizon must be nonnegative");
  for (const auto& a : actions) {
    if (a.outcomes.empty()) throw ModelError("action " + a.to_string() + " has no outcomes");
    double total = 0.0;
    for (const auto& o : a.outcomes) {
      if (o.probability < 0.0 || !std::isfinite(o.probability)) {
        throw ModelError("action " + a.to_string() + " has an invalid outcome probability");
      }
      total += o.probability;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw ModelError("outcome probabilities of " + a.to_string() + " sum to " + std::to_string(total));
    }
    if (a.cost < 0.0 || !std::isfinite(a.cost)) {
      throw ModelError("action " + a.to_string() + " has a negative or non-finite cost");
    }
  }
  std::sort(actions.begin(), actions.end(), action_less);
  actions_ = std::make_shared<const std::vector<GroundedAction>>(std::move(actions));
}

bool SspModel::is_goal(const LogicalStructure& state) const {
  return logic::evaluate(*goal_, state) == logic::Truth::True;
}

std::vector<std::pair<LogicalStructure, double>> SspModel::transition(const LogicalStructure& state,
                                                                     const GroundedAction& action) const {
  std::vector<std::pair<LogicalStructure, double>> out;
  out.reserve(action.outcomes.size());
  for (const auto& o : action.outcomes) out.emplace_back(apply_outcome(state, o), o.probability);
  return out;
}

SspModel SspModel::with_initial(LogicalStructure initial) const {
  SspModel copy = *this;
  copy.initial_ = std::make_shared<const LogicalStructure>(std::move(initial));
  return copy;
}

SspModel SspModel::with_horizon(int horizon) const {
  if (horizon < 0) throw ModelError("horizon must be nonnegative");
  SspModel copy = *this;
  copy.horizon_ = horizon;
  return copy;
}

} // namespace stamp::ssp

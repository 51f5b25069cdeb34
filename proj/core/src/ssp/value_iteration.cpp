#include "stamp/ssp/value_iteration.hpp"

#include <set>

namespace stamp::ssp {

StateId StateTable::intern(const LogicalStructure& state) {
  auto key = state.interpretation_key();
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  StateId id = states_.size();
  states_.push_back(std::make_shared<const LogicalStructure>(state));
  index_.emplace(std::move(key), id);
  return id;
}

StateId StateTable::intern(StatePtr state) {
  auto key = state->interpretation_key();
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  StateId id = states_.size();
  states_.push_back(std::move(state));
  index_.emplace(std::move(key), id);
  return id;
}

std::optional<StateId> StateTable::find(const LogicalStructure& state) const {
  auto it = index_.find(state.interpretation_key());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double Solution::value(const LogicalStructure& state, int t) const {
  auto id = states.find(state);
  if (!id) throw ModelError("state not reachable in this solution");
  auto it = values.find({*id, t});
  if (it == values.end()) throw ModelError("state not reachable at timestep " + std::to_string(t));
  return it->second;
}

double Solution::initial_value() const { return values.at({0, 0}); }

std::optional<std::size_t> Solution::action(const LogicalStructure& state, int t) const {
  auto id = states.find(state);
  if (!id) return std::nullopt;
  return action(*id, t);
}

std::optional<std::size_t> Solution::action(StateId state, int t) const {
  auto it = policy.find({state, t});
  if (it == policy.end()) return std::nullopt;
  return it->second;
}

namespace {

struct Expansion {
  std::vector<std::size_t> applicable;
  /// Per applicable action: successor ids with probabilities.
  std::vector<std::vector<std::pair<StateId, double>>> successors;
};

} // namespace

Solution value_iteration(const SspModel& model, const SolveOptions& options) {
  Solution sol;
  const int H = model.horizon();
  sol.horizon = H;
  const StateId s0 = sol.states.intern(model.initial_ptr());

  std::vector<char> goal;
  auto is_goal = [&](StateId s) {
    while (goal.size() <= s) {
      goal.push_back(model.is_goal(*sol.states.state(goal.size())) ? 1 : 0);
    }
    return goal[s] != 0;
  };

  std::unordered_map<StateId, Expansion> expanded;
  std::set<StateId> dead;
  std::vector<std::vector<StateId>> layers(H + 1);
  layers[0].push_back(s0);

  for (int t = 0; t < H; ++t) {
    std::set<StateId> next;
    for (StateId s : layers[t]) {
      if (is_goal(s)) continue;
      auto it = expanded.find(s);
      if (it == expanded.end()) {
        Expansion e;
        const auto& state = *sol.states.state(s);
        for (std::size_t a = 0; a < model.actions().size(); ++a) {
          const auto& action = model.actions()[a];
          if (!applicable(action, state)) continue;
          std::vector<std::pair<StateId, double>> succ;
          for (auto& [s2, p] : model.transition(state, action)) succ.emplace_back(sol.states.intern(s2), p);
          e.applicable.push_back(a);
          e.successors.push_back(std::move(succ));
        }
        if (e.applicable.empty()) {
          if (options.dead_ends == DeadEnds::Error) {
            throw DeadEndError("no applicable action in reachable non-goal state: " + state.describe());
          }
          dead.insert(s);
        }
        it = expanded.emplace(s, std::move(e)).first;
      }
      for (const auto& succ : it->second.successors) {
        for (const auto& [s2, p] : succ) {
          if (p > 0.0) next.insert(s2);
        }
      }
    }
    layers[t + 1].assign(next.begin(), next.end());
  }

  for (StateId s : layers[H]) sol.values[{s, H}] = 0.0;
  for (int t = H - 1; t >= 0; --t) {
    for (StateId s : layers[t]) {
      if (is_goal(s)) {
        sol.values[{s, t}] = 0.0;
        continue;
      }
      if (dead.count(s)) {
        sol.values[{s, t}] = options.dead_end_value;
        continue;
      }
      const auto& e = expanded.at(s);
      double best = std::numeric_limits<double>::infinity();
      std::optional<std::size_t> best_action;
      for (std::size_t i = 0; i < e.applicable.size(); ++i) {
        double q = model.actions()[e.applicable[i]].cost;
        for (const auto& [s2, p] : e.successors[i]) {
          if (p > 0.0) q += p * sol.values.at({s2, t + 1});
        }
        if (!best_action || q < best - 1e-12) {
          best = q;
          best_action = e.applicable[i];
        }
      }
      sol.values[{s, t}] = best;
      sol.policy[{s, t}] = *best_action;
    }
  }
  sol.dead_ends.assign(dead.begin(), dead.end());

  if (sol.values.at({s0, 0}) == std::numeric_limits<double>::infinity()) {
    std::string named = dead.empty() ? model.initial().describe() : sol.states.state(*dead.begin())->describe();
    throw DeadEndError("every policy reaches a dead end, e.g. " + named);
  }
  return sol;
}

double goal_probability(const SspModel& model, const Solution& solution) {
  std::map<StateId, double> dist{{0, 1.0}};
  double reached = 0.0;
  for (int t = 0; t <= solution.horizon; ++t) {
    std::map<StateId, double> next;
    for (const auto& [s, p] : dist) {
      const auto& state = *solution.states.state(s);
      if (model.is_goal(state)) {
        reached += p;
        continue;
      }
      if (t == solution.horizon) continue;
      auto a = solution.action(s, t);
      if (!a) continue;
      for (auto& [s2, q] : model.transition(state, model.actions()[*a])) {
        if (q <= 0.0) continue;
        auto id = solution.states.find(s2);
        if (!id) throw ModelError("policy successor missing from solution");
        next[*id] += p * q;
      }
    }
    dist = std::move(next);
  }
  return reached;
}

SspModel extend_horizon(const SspModel& model, int step, int cap) {
  if (step < 1) throw ModelError("horizon extension step must be at least 1");
  int h = model.horizon() + step;
  if (h > cap) {
    throw HorizonCapError("goal unreachable within horizon cap " + std::to_string(cap));
  }
  return model.with_horizon(h);
}

std::pair<SspModel, Solution> solve_with_dynamic_horizon(SspModel model, const SolveOptions& options, int cap) {
  for (;;) {
    std::optional<Solution> sol;
    try {
      sol = value_iteration(model, options);
    } catch (const DeadEndError&) {
      if (options.dead_ends == DeadEnds::Error) throw;
    }
    if (sol && goal_probability(model, *sol) > 0.0) return {std::move(model), std::move(*sol)};
    model = extend_horizon(model, 1, cap);
  }
}

} // namespace stamp::ssp

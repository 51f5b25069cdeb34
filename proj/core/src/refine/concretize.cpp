#include "stamp/refine/concretize.hpp"

#include <algorithm>
#include <functional>
#include <memory>

namespace stamp::refine {

namespace {

struct Level {
  VertexId vertex;
  WorldState world;
  Assignment values;
  int tries = 0;
};

bool within(const domains::Work& spent, const ResourceLimit& limit) {
  return spent.samples < limit.samples && spent.planner_calls < limit.planner_calls;
}

std::optional<Explored> explore(PrgNode& node, const ssp::RtlPath& path, std::size_t first, Rng& rng, const SolveSettings& settings) {
  std::vector<VertexId> open;
  for (std::size_t i = first; i + 1 < path.vertices.size(); ++i) open.push_back(path.vertices[i]);
  if (open.empty()) return std::nullopt;
  const VertexId at = open[rng.index(open.size())];
  const auto& vx = node.tree.vertex(at);
  const auto& state = *vx.state;
  const auto& model = node.model;

  std::vector<std::size_t> options;
  for (std::size_t i = 0; i < model.actions().size(); ++i) {
    const auto& a = model.actions()[i];
    if (vx.action && a.to_string() == vx.action->to_string()) continue;
    if (ssp::applicable(a, state)) options.push_back(i);
  }
  if (options.empty()) return std::nullopt;
  const auto& action = model.actions()[options[rng.index(options.size())]];

  ssp::PolicyTree sub;
  const VertexId root = sub.add_root(vx.state, 0);
  sub.vertex(root).action = action;
  const int remaining = model.horizon() - vx.t - 1;
  auto succ = model.transition(state, action);
  try {
    std::vector<std::pair<VertexId, ssp::PolicyTree>> parts;
    for (std::size_t k = 0; k < succ.size(); ++k) {
      if (succ[k].second <= 0.0) continue;
      auto child_state = std::make_shared<const logic::LogicalStructure>(succ[k].first);
      VertexId c = sub.add_child(root, static_cast<int>(k), succ[k].second, child_state);
      sub.vertex(c).t = 1;
      parts.emplace_back(c, solve_subtree(model, *child_state, remaining, settings));
    }
    for (auto& [c, tree] : parts) sub.graft(c, tree);
  } catch (const ssp::ModelError&) {
    return std::nullopt;
  }
  // Values below `at` were never committed, so only worlds need dropping.
  std::vector<VertexId> stale;
  std::function<void(VertexId)> collect = [&](VertexId v) {
    for (VertexId c : node.tree.vertex(v).children) {
      stale.push_back(c);
      collect(c);
    }
  };
  collect(at);
  for (VertexId v : stale) node.sigma.erase(v);
  node.tree.graft(at, sub);
  return Explored{at};
}

} // namespace

RefinementOutcome concretize_path(PrgNode& node, const ssp::RtlPath& path, const domains::StamppProblem& problem,
                                  Rng& rng, const ResourceLimit& limit, double explore_prob, domains::Work& work,
                                  const SolveSettings& settings) {
  const auto& engine = *problem.engine;
  const auto& vs = path.vertices;
  std::size_t first = 0;
  while (first < vs.size()) {
    auto it = node.sigma.find(vs[first]);
    if (it == node.sigma.end() || !it->second.values) break;
    ++first;
  }
  if (first >= vs.size()) throw RefineError("path already refined");
  auto start = node.sigma.find(vs[first]);
  if (start == node.sigma.end()) throw RefineError("no concrete state at vertex " + std::to_string(vs[first]));
  if (first + 1 == vs.size()) {
    // The leaf already has a concrete state; nothing left to sample.
    return Feasible{{{vs[first], {start->second.world, std::nullopt}}}};
  }

  domains::Work spent;
  std::vector<Level> stack{{vs[first], start->second.world, {}, 0}};
  std::optional<Failure> deepest;
  std::size_t deepest_depth = 0;
  std::string last_reason;

  while (!stack.empty()) {
    if (!within(spent, limit)) break;
    const std::size_t i = first + stack.size() - 1;
    if (i + 1 == vs.size()) {
      Sigma out;
      for (auto& level : stack) {
        out[level.vertex] = {level.world, std::nullopt};
        if (level.vertex != vs.back()) out[level.vertex].values = level.values;
      }
      work += spent;
      return Feasible{std::move(out)};
    }
    auto& level = stack.back();
    if (level.tries >= limit.tries_per_vertex) {
      stack.pop_back();
      continue;
    }
    if (explore_prob > 0.0 && rng.bernoulli(explore_prob)) {
      work += spent;
      if (auto done = explore(node, path, first, rng, settings)) return *done;
      spent = {};
    }
    ++level.tries;
    const auto& vx = node.tree.vertex(level.vertex);
    auto attempt = engine.attempt(*vx.state, level.world, *vx.action, rng);
    spent += attempt.work;
    if (!attempt.feasible) {
      last_reason = attempt.reason;
      if (!attempt.atoms.empty() && (!deepest || stack.size() >= deepest_depth)) {
        Failure f;
        f.vertex = level.vertex;
        f.atoms = attempt.atoms;
        f.leaf = vs.back();
        for (std::size_t k = 0; k + 1 < stack.size(); ++k) f.sigma[stack[k].vertex] = {stack[k].world, stack[k].values};
        f.sigma[level.vertex] = {level.world, std::nullopt};
        deepest = std::move(f);
        deepest_depth = stack.size();
      }
      continue;
    }
    level.values = attempt.values;
    const auto& child = node.tree.vertex(vs[i + 1]);
    WorldState next = engine.apply(level.world, *vx.action, level.values, static_cast<std::size_t>(child.outcome), rng);
    stack.push_back({vs[i + 1], std::move(next), {}, 0});
  }
  work += spent;
  if (deepest) return Failed{std::move(*deepest)};
  VertexId at = stack.empty() ? vs[first] : stack.back().vertex;
  return Exhausted{at, last_reason.empty() ? "resource limit" : last_reason};
}

std::vector<VertexId> commit(PrgNode& node, const Sigma& delta, const domains::StamppProblem& problem, Rng& rng) {
  const auto& engine = *problem.engine;
  std::vector<VertexId> touched;
  for (const auto& [v, r] : delta) {
    auto& slot = node.sigma[v];
    if (slot.values) continue;
    slot.world = r.world;
    if (r.values) {
      slot.values = r.values;
      touched.push_back(v);
    }
  }
  for (VertexId v : touched) {
    const auto& vx = node.tree.vertex(v);
    const auto& r = node.sigma.at(v);
    for (VertexId c : vx.children) {
      if (node.sigma.count(c)) continue;
      const auto& cv = node.tree.vertex(c);
      node.sigma[c].world = engine.apply(r.world, *vx.action, *r.values, static_cast<std::size_t>(cv.outcome), rng);
    }
  }
  std::vector<VertexId> fresh;
  for (VertexId leaf : node.tree.leaves()) {
    if (node.refined.count(leaf)) continue;
    if (path_refined(node, leaf)) fresh.push_back(leaf);
  }
  return fresh;
}

NodeId update_abstraction(Prg& prg, NodeId from, const Failure& failure, const domains::StamppProblem& problem,
                          Rng& rng, const SolveSettings& settings) {
  if (failure.atoms.empty()) throw RefineError("abstraction update needs at least one failed atom");
  PrgNode child = prg.node(from);
  child.pending.reset();
  child.dead = false;

  // Commit the witnessing prefix; the failure vertex itself keeps only its state.
  Sigma prefix;
  for (const auto& [v, r] : failure.sigma) {
    if (v != failure.vertex) prefix[v] = r;
  }
  auto fresh = commit(child, prefix, problem, rng);
  for (VertexId leaf : fresh) child.refined.emplace(leaf, -1);

  auto& vx = child.tree.vertex(failure.vertex);
  auto updated = *vx.state;
  for (const auto& atom : failure.atoms) updated.set(atom.relation, atom.args, atom.value);

  std::vector<VertexId> stale;
  std::function<void(VertexId)> collect = [&](VertexId v) {
    for (VertexId c : child.tree.vertex(v).children) {
      stale.push_back(c);
      collect(c);
    }
  };
  collect(failure.vertex);
  for (VertexId v : stale) {
    child.sigma.erase(v);
    child.refined.erase(v);
  }
  vx.state = std::make_shared<const logic::LogicalStructure>(updated);
  auto world = failure.sigma.count(failure.vertex) ? failure.sigma.at(failure.vertex).world
                                                   : child.sigma.at(failure.vertex).world;
  child.sigma[failure.vertex] = {world, std::nullopt};

  try {
    auto sub = solve_subtree(child.model, updated, child.model.horizon() - vx.t, settings);
    child.tree.graft(failure.vertex, sub);
    if (path_refined(child, failure.vertex)) child.refined.emplace(failure.vertex, -1);
  } catch (const ssp::ModelError&) {
    child.tree.prune_below(failure.vertex);
    child.dead = true;
  }

  NodeId id = prg.add_node(std::move(child), from);
  prg.add_edge({from, id, failure.sigma, failure.atoms});
  return id;
}

} // namespace stamp::refine

namespace stamp::refine {

std::vector<std::string> audit(const PrgNode& node, const std::set<VertexId>& leaves,
                               const domains::StamppProblem& problem) {
  std::vector<std::string> problems;
  std::set<VertexId> seen;
  for (VertexId leaf : leaves) {
    if (!node.tree.contains(leaf)) {
      problems.push_back("leaf " + std::to_string(leaf) + " missing from tree");
      continue;
    }
    if (!node.sigma.count(leaf)) problems.push_back("leaf " + std::to_string(leaf) + " has no concrete state");
    for (VertexId v : node.tree.path_to(leaf).vertices) {
      if (v == leaf || !seen.insert(v).second) continue;
      const auto& vx = node.tree.vertex(v);
      auto it = node.sigma.find(v);
      if (it == node.sigma.end() || !it->second.values || !vx.action) {
        problems.push_back("vertex " + std::to_string(v) + " lacks a concretization");
        continue;
      }
      for (auto& msg : problem.engine->verify(*vx.state, it->second.world, *vx.action, *it->second.values)) {
        problems.push_back("vertex " + std::to_string(v) + " " + vx.action->to_string() + ": " + msg);
      }
    }
  }
  return problems;
}

} // namespace stamp::refine

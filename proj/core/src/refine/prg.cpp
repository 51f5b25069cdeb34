#include "stamp/refine/prg.hpp"

#include <algorithm>
#include <functional>

#include "stamp/anytime/anytime.hpp"

namespace stamp::refine {

double PrgNode::refined_mass() const {
  double mass = 0.0;
  for (const auto& [leaf, snapshot] : refined) mass += tree.path_probability(leaf);
  return std::min(mass, 1.0);
}

bool PrgNode::has_partial_concretization() const {
  return std::any_of(sigma.begin(), sigma.end(), [](const auto& kv) { return kv.second.values.has_value(); });
}

NodeId Prg::add_node(PrgNode node, std::optional<NodeId> parent) {
  node.id = nodes_.size();
  node.parent = parent;
  node.children.clear();
  nodes_.push_back(std::move(node));
  if (parent) nodes_.at(*parent).children.push_back(nodes_.back().id);
  return nodes_.back().id;
}

ssp::PolicyTree solve_subtree(const ssp::SspModel& model, const logic::LogicalStructure& state, int horizon,
                              const SolveSettings& settings) {
  ssp::SolveOptions options;
  options.dead_ends = ssp::DeadEnds::Penalize;
  options.dead_end_value = settings.dead_end_value;
  auto sub = model.with_initial(state).with_horizon(std::max(horizon, 0));
  if (sub.is_goal(sub.initial()) || horizon <= 0) {
    auto solution = ssp::value_iteration(sub, options);
    return ssp::unroll(solution, sub);
  }
  auto [extended, solution] = ssp::solve_with_dynamic_horizon(sub, options, settings.horizon_cap);
  return ssp::unroll(solution, extended);
}

Prg init_prg(const domains::StamppProblem& problem, const SolveSettings& settings) {
  const auto& model = problem.abstract_model;
  PrgNode node{0, std::nullopt, {}, model, solve_subtree(model, model.initial(), model.horizon(), settings),
               {}, {}, false, std::nullopt};
  node.sigma[node.tree.root()].world = problem.initial_world;
  Prg prg;
  prg.add_node(std::move(node), std::nullopt);
  return prg;
}

namespace {

bool available(const PrgNode& node, int breadth) {
  return !node.dead && static_cast<int>(node.children.size()) < breadth;
}

// Children newest first, limited to the first `breadth`.
std::vector<NodeId> visible_children(const PrgNode& node, int breadth) {
  std::vector<NodeId> kids(node.children.rbegin(), node.children.rend());
  if (static_cast<int>(kids.size()) > breadth) kids.resize(static_cast<std::size_t>(breadth));
  return kids;
}

} // namespace

std::vector<NodeId> dfs_order(const Prg& prg, int breadth) {
  std::vector<NodeId> order;
  if (prg.size() == 0) return order;
  std::function<void(NodeId)> walk = [&](NodeId id) {
    order.push_back(id);
    for (NodeId c : visible_children(prg.node(id), breadth)) walk(c);
  };
  walk(0);
  return order;
}

std::optional<NodeId> BroadeningSearch::select(const Prg& prg) {
  while (true) {
    // Deepest available node in preorder: the newest line of refinement.
    std::optional<NodeId> found;
    for (NodeId id : dfs_order(prg, breadth_)) {
      if (available(prg.node(id), breadth_)) found = id;
    }
    if (found) return found;
    bool wider = std::any_of(prg.nodes().begin(), prg.nodes().end(), [&](const PrgNode& n) {
      return !n.dead && static_cast<int>(n.children.size()) >= breadth_;
    });
    bool hidden = std::any_of(prg.nodes().begin(), prg.nodes().end(),
                              [&](const PrgNode& n) { return static_cast<int>(n.children.size()) > breadth_; });
    if (!wider && !hidden) return std::nullopt;
    breadth_ += 5;
  }
}

std::optional<NodeId> get_pr_node(const Prg& prg, BroadeningSearch& search) { return search.select(prg); }

bool path_refined(const PrgNode& node, VertexId leaf) {
  const auto& v = node.tree.vertex(leaf);
  if (!v.is_leaf() || v.leaf == ssp::LeafKind::Frontier || v.leaf == ssp::LeafKind::None) return false;
  if (!node.sigma.count(leaf)) return false;
  auto p = v.parent;
  while (p) {
    auto it = node.sigma.find(*p);
    if (it == node.sigma.end() || !it->second.values) return false;
    p = node.tree.vertex(*p).parent;
  }
  return true;
}

std::optional<ssp::RtlPath> get_unrefined_path(const PrgNode& node, const domains::StamppProblem& problem) {
  std::vector<ssp::RtlPath> candidates;
  std::vector<anytime::PathPriorityEntry> entries;
  for (auto& path : node.tree.paths()) {
    if (node.refined.count(path.vertices.back())) continue;
    std::vector<std::string> symbols;
    for (VertexId v : path.vertices) {
      const auto& vx = node.tree.vertex(v);
      if (!vx.action) continue;
      auto it = node.sigma.find(v);
      if (it != node.sigma.end() && it->second.values) continue;
      for (auto& s : problem.engine->symbolic_arguments(*vx.action)) symbols.push_back(s);
    }
    entries.push_back({path.id, path.probability,
                       anytime::estimate_cost(symbols, problem.rho, problem.workspace_measure)});
    candidates.push_back(std::move(path));
  }
  if (entries.empty()) return std::nullopt;
  const auto& best = anytime::select_path(entries);
  return candidates.at(static_cast<std::size_t>(&best - entries.data()));
}

} // namespace stamp::refine

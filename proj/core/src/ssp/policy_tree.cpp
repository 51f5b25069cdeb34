#include "stamp/ssp/policy_tree.hpp"

#include <cmath>
#include <functional>

namespace stamp::ssp {

const char* to_string(LeafKind kind) {
  switch (kind) {
    case LeafKind::None: return "none";
    case LeafKind::Goal: return "goal";
    case LeafKind::Horizon: return "horizon";
    case LeafKind::Frontier: return "frontier";
    case LeafKind::DeadEnd: return "dead_end";
  }
  return "none";
}

VertexId PolicyTree::add_root(StatePtr state, int t) {
  if (root_) throw ModelError("policy tree already has a root");
  VertexId id = next_id_++;
  Vertex v;
  v.id = id;
  v.state = std::move(state);
  v.t = t;
  vertices_.emplace(id, std::move(v));
  root_ = id;
  return id;
}

VertexId PolicyTree::add_child(VertexId parent, int outcome, double probability, StatePtr state) {
  auto& p = vertex(parent);
  VertexId id = next_id_++;
  Vertex v;
  v.id = id;
  v.state = std::move(state);
  v.t = p.t + 1;
  v.parent = parent;
  v.outcome = outcome;
  v.edge_probability = probability;
  p.children.push_back(id);
  p.leaf = LeafKind::None;
  vertices_.emplace(id, std::move(v));
  return id;
}

VertexId PolicyTree::root() const {
  if (!root_) throw ModelError("policy tree is empty");
  return *root_;
}

const Vertex& PolicyTree::vertex(VertexId id) const {
  auto it = vertices_.find(id);
  if (it == vertices_.end()) throw ModelError("no vertex " + std::to_string(id));
  return it->second;
}

Vertex& PolicyTree::vertex(VertexId id) {
  auto it = vertices_.find(id);
  if (it == vertices_.end()) throw ModelError("no vertex " + std::to_string(id));
  return it->second;
}

std::vector<VertexId> PolicyTree::leaves() const {
  std::vector<VertexId> out;
  for (const auto& p : paths()) out.push_back(p.vertices.back());
  return out;
}

std::vector<RtlPath> PolicyTree::paths() const {
  std::vector<RtlPath> out;
  if (!root_) return out;
  RtlPath current;
  std::function<void(VertexId)> walk = [&](VertexId id) {
    const auto& v = vertex(id);
    current.vertices.push_back(id);
    if (v.children.empty()) {
      out.push_back(current);
    } else {
      for (VertexId c : v.children) {
        const auto& child = vertex(c);
        RtlPath saved = current;
        current.probability *= child.edge_probability;
        if (!current.id.empty()) current.id += '.';
        current.id += std::to_string(child.outcome);
        walk(c);
        current = std::move(saved);
      }
    }
    current.vertices.pop_back();
  };
  walk(*root_);
  return out;
}

RtlPath PolicyTree::path_to(VertexId leaf) const {
  RtlPath path;
  std::vector<VertexId> rev;
  for (std::optional<VertexId> v = leaf; v; v = vertex(*v).parent) rev.push_back(*v);
  path.vertices.assign(rev.rbegin(), rev.rend());
  for (std::size_t i = 1; i < path.vertices.size(); ++i) {
    const auto& v = vertex(path.vertices[i]);
    path.probability *= v.edge_probability;
    if (i > 1) path.id += '.';
    path.id += std::to_string(v.outcome);
  }
  return path;
}

double PolicyTree::path_probability(VertexId id) const { return path_to(id).probability; }

void PolicyTree::prune_below(VertexId id) {
  auto& v = vertex(id);
  std::vector<VertexId> stack = v.children;
  v.children.clear();
  v.action.reset();
  while (!stack.empty()) {
    VertexId c = stack.back();
    stack.pop_back();
    auto it = vertices_.find(c);
    for (VertexId g : it->second.children) stack.push_back(g);
    vertices_.erase(it);
  }
}

void PolicyTree::graft(VertexId at, const PolicyTree& subtree) {
  if (!(*vertex(at).state == *subtree.vertex(subtree.root()).state)) {
    throw ModelError("graft state mismatch at vertex " + std::to_string(at));
  }
  prune_below(at);
  const int offset = vertex(at).t - subtree.vertex(subtree.root()).t;
  std::function<void(VertexId, VertexId)> copy = [&](VertexId dst, VertexId src) {
    const auto& s = subtree.vertex(src);
    auto& d = vertex(dst);
    d.action = s.action;
    d.leaf = s.leaf;
    d.status = RefinementStatus::Unrefined;
    for (VertexId c : s.children) {
      const auto& sc = subtree.vertex(c);
      VertexId nc = add_child(dst, sc.outcome, sc.edge_probability, sc.state);
      vertex(nc).t = sc.t + offset;
      copy(nc, c);
    }
    vertex(dst).leaf = s.leaf;
  };
  copy(at, subtree.root());
}

PolicyTree unroll(const Solution& solution, const SspModel& model, int depth_bound) {
  if (depth_bound < 0) depth_bound = solution.horizon;
  PolicyTree tree;
  VertexId root = tree.add_root(model.initial_ptr(), 0);
  std::vector<std::pair<VertexId, StateId>> stack{{root, 0}};
  while (!stack.empty()) {
    auto [vid, sid] = stack.back();
    stack.pop_back();
    auto& v = tree.vertex(vid);
    const auto& state = *solution.states.state(sid);
    if (model.is_goal(state)) {
      v.leaf = LeafKind::Goal;
      continue;
    }
    if (v.t >= solution.horizon) {
      v.leaf = LeafKind::Horizon;
      continue;
    }
    auto a = solution.action(sid, v.t);
    if (!a) {
      v.leaf = LeafKind::DeadEnd;
      continue;
    }
    if (v.t >= depth_bound) {
      v.leaf = LeafKind::Frontier;
      continue;
    }
    const auto& action = model.actions()[*a];
    v.action = action;
    const int t = v.t;
    auto succ = model.transition(state, action);
    std::vector<std::pair<VertexId, StateId>> kids;
    for (std::size_t i = 0; i < succ.size(); ++i) {
      if (succ[i].second <= 0.0) continue;
      auto s2 = solution.states.find(succ[i].first);
      if (!s2) throw ModelError("policy successor missing from solution");
      VertexId c = tree.add_child(vid, static_cast<int>(i), succ[i].second, solution.states.state(*s2));
      tree.vertex(c).t = t + 1;
      kids.emplace_back(c, *s2);
    }
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return tree;
}

PolicyTree merge(PolicyTree tree, VertexId at, const PolicyTree& subtree) {
  tree.graft(at, subtree);
  return tree;
}

bool structurally_equal(const PolicyTree& a, const PolicyTree& b) {
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  std::function<bool(VertexId, VertexId)> eq = [&](VertexId x, VertexId y) {
    const auto& u = a.vertex(x);
    const auto& v = b.vertex(y);
    if (u.t != v.t || u.leaf != v.leaf || u.outcome != v.outcome) return false;
    if (std::abs(u.edge_probability - v.edge_probability) > 1e-12) return false;
    if (!(*u.state == *v.state)) return false;
    if (u.action.has_value() != v.action.has_value()) return false;
    if (u.action && u.action->to_string() != v.action->to_string()) return false;
    if (u.children.size() != v.children.size()) return false;
    for (std::size_t i = 0; i < u.children.size(); ++i) {
      if (!eq(u.children[i], v.children[i])) return false;
    }
    return true;
  };
  return eq(a.root(), b.root());
}

} // namespace stamp::ssp

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stamp/ssp/model.hpp"
#include "stamp/ssp/value_iteration.hpp"

namespace stamp::ssp {

using VertexId = std::uint64_t;

enum class LeafKind { None, Goal, Horizon, Frontier, DeadEnd };
enum class RefinementStatus { Unrefined, Refined };

const char* to_string(LeafKind kind);

struct Vertex {
  VertexId id = 0;
  StatePtr state;
  /// Depth in the tree; equals the timestep of the policy that chose the action.
  int t = 0;
  std::optional<VertexId> parent;
  /// Outcome index on the edge from the parent, and that outcome's probability.
  int outcome = -1;
  double edge_probability = 1.0;
  std::optional<GroundedAction> action;
  /// children[i] follows outcome i of `action`. Zero-probability outcomes are omitted.
  std::vector<VertexId> children;
  LeafKind leaf = LeafKind::None;
  RefinementStatus status = RefinementStatus::Unrefined;

  bool is_leaf() const { return children.empty(); }
};

/// A root-to-leaf path.
struct RtlPath {
  std::vector<VertexId> vertices;
  double probability = 1.0;
  /// Outcome indices joined by '.', e.g. "0.1.0"; empty for the root alone.
  std::string id;
};

class PolicyTree {
public:
  PolicyTree() = default;

  VertexId add_root(StatePtr state, int t = 0);
  VertexId add_child(VertexId parent, int outcome, double probability, StatePtr state);

  bool empty() const { return vertices_.empty(); }
  VertexId root() const;
  const Vertex& vertex(VertexId id) const;
  Vertex& vertex(VertexId id);
  bool contains(VertexId id) const { return vertices_.count(id) > 0; }
  const std::map<VertexId, Vertex>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

  /// Number of parent-child edges leaving `id`.
  std::size_t out_degree(VertexId id) const { return vertex(id).children.size(); }
  std::vector<VertexId> leaves() const;
  std::vector<RtlPath> paths() const;
  RtlPath path_to(VertexId leaf) const;
  double path_probability(VertexId id) const;

  /// Removes every descendant of `id` and clears its action.
  void prune_below(VertexId id);

  /// Replaces the suffix at `at` with a copy of `subtree`. The grafted part is
  /// marked unrefined. Throws ModelError when the states differ.
  void graft(VertexId at, const PolicyTree& subtree);

private:
  std::map<VertexId, Vertex> vertices_;
  std::optional<VertexId> root_;
  VertexId next_id_ = 0;
};

/// Unrolls the policy from s0 up to `depth_bound` (default: the horizon).
/// Non-goal states at depth H become Horizon leaves; states cut off earlier
/// by the bound become Frontier leaves.
PolicyTree unroll(const Solution& solution, const SspModel& model, int depth_bound = -1);

PolicyTree merge(PolicyTree tree, VertexId at, const PolicyTree& subtree);

/// Same shape, states, actions, probabilities and leaf kinds, ignoring ids.
bool structurally_equal(const PolicyTree& a, const PolicyTree& b);

} // namespace stamp::ssp

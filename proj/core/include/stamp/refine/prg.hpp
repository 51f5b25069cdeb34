#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stamp/domains/engine.hpp"
#include "stamp/domains/problem.hpp"
#include "stamp/ssp/policy_tree.hpp"

namespace stamp::refine {

using domains::Assignment;
using domains::GroundAtom;
using domains::WorldState;
using ssp::VertexId;

class RefineError : public Error {
public:
  using Error::Error;
};

/// Concrete data attached to one policy-tree vertex.
struct VertexRefinement {
  WorldState world;
  /// Values for the vertex's action arguments, once committed.
  std::optional<Assignment> values;
};

/// Partial concretization: vertex -> concrete state (and action values).
using Sigma = std::map<VertexId, VertexRefinement>;

struct Failure {
  VertexId vertex = 0;
  std::vector<GroundAtom> atoms;
  /// Assignments and states along the path that reached `vertex`.
  Sigma sigma;
  VertexId leaf = 0;
};

using NodeId = std::size_t;

struct PrgNode {
  NodeId id = 0;
  std::optional<NodeId> parent;
  std::vector<NodeId> children;
  ssp::SspModel model;
  ssp::PolicyTree tree;
  Sigma sigma;
  /// Fully refined leaves, with the snapshot index at which each became refined.
  std::map<VertexId, int> refined;
  bool dead = false;
  std::optional<Failure> pending;

  /// Sum of path probabilities of refined leaves.
  double refined_mass() const;
  bool has_partial_concretization() const;
};

struct PrgEdge {
  NodeId from = 0;
  NodeId to = 0;
  Sigma sigma;
  std::vector<GroundAtom> failed;
};

class Prg {
public:
  NodeId add_node(PrgNode node, std::optional<NodeId> parent);
  void add_edge(PrgEdge edge) { edges_.push_back(std::move(edge)); }

  const PrgNode& node(NodeId id) const { return nodes_.at(id); }
  PrgNode& node(NodeId id) { return nodes_.at(id); }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<PrgNode>& nodes() const { return nodes_; }
  const std::vector<PrgEdge>& edges() const { return edges_; }

private:
  std::vector<PrgNode> nodes_;
  std::vector<PrgEdge> edges_;
};

struct SolveSettings {
  int horizon_cap = ssp::kDefaultHorizonCap;
  /// Value assigned to states with no applicable action.
  double dead_end_value = 1e4;
};

/// Solves the abstract model (extending the horizon while the goal is
/// unreachable) and returns a one-node PRG. Throws HorizonCapError.
Prg init_prg(const domains::StamppProblem& problem, const SolveSettings& settings = {});

/// Solves from `state` with `horizon` steps and unrolls the policy.
ssp::PolicyTree solve_subtree(const ssp::SspModel& model, const logic::LogicalStructure& state, int horizon,
                              const SolveSettings& settings);

/// Iterative-broadening depth-first choice of the node to work on. Within
/// breadth b, only the first b children of a node are visited and a node with
/// b or more children is not itself chosen. When nothing is available the
/// breadth grows by 5.
class BroadeningSearch {
public:
  explicit BroadeningSearch(int breadth = 5) : breadth_(breadth) {}
  std::optional<NodeId> select(const Prg& prg);
  int breadth() const { return breadth_; }

private:
  int breadth_;
};

/// Preorder of nodes visited by a sweep at breadth b.
std::vector<NodeId> dfs_order(const Prg& prg, int breadth);

std::optional<NodeId> get_pr_node(const Prg& prg, BroadeningSearch& search);

/// Highest p / c-hat unrefined path of the node; nullopt when all are refined.
std::optional<ssp::RtlPath> get_unrefined_path(const PrgNode& node, const domains::StamppProblem& problem);

/// Leaves whose whole path is concretized, including terminal leaves reached
/// through committed siblings.
bool path_refined(const PrgNode& node, VertexId leaf);

} // namespace stamp::refine

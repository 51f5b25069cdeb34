#pragma once

#include <variant>

#include "stamp/common/rng.hpp"
#include "stamp/refine/prg.hpp"

namespace stamp::refine {

struct ResourceLimit {
  long long samples = 2000;
  int planner_calls = 20;
  /// Attempts at one vertex before backtracking to its predecessor.
  int tries_per_vertex = 5;
};

struct Feasible {
  /// New assignments and states for the unassigned part of the path.
  Sigma sigma;
};

struct Failed {
  Failure failure;
};

/// Limit reached without identifying blocking atoms.
struct Exhausted {
  VertexId deepest = 0;
  std::string reason;
};

/// The explore step replaced part of the path's suffix.
struct Explored {
  VertexId vertex = 0;
};

using RefinementOutcome = std::variant<Feasible, Failed, Exhausted, Explored>;

/// Backtracking search for values of the unassigned suffix of `path`. The
/// committed prefix is frozen. With probability `explore_prob` the call
/// instead swaps a random applicable action into the unassigned suffix.
RefinementOutcome concretize_path(PrgNode& node, const ssp::RtlPath& path, const domains::StamppProblem& problem,
                                  Rng& rng, const ResourceLimit& limit, double explore_prob,
                                  domains::Work& work, const SolveSettings& settings = {});

/// Adds `delta` to the node and samples concrete states for every child of
/// each newly assigned vertex. Returns leaves that became refined.
std::vector<VertexId> commit(PrgNode& node, const Sigma& delta, const domains::StamppProblem& problem, Rng& rng);

/// Child node where the failed atoms hold at the failure vertex, the suffix
/// below it is replaced by a fresh abstract policy, and `failure.sigma` is
/// committed. Marks the child dead when the updated problem is unsolvable.
NodeId update_abstraction(Prg& prg, NodeId node, const Failure& failure, const domains::StamppProblem& problem,
                          Rng& rng, const SolveSettings& settings = {});

} // namespace stamp::refine

namespace stamp::refine {

/// Re-checks every action on the paths to `leaves`: preconditions must be
/// True under the stored values and trajectories collision-free. Returns one
/// message per violation.
std::vector<std::string> audit(const PrgNode& node, const std::set<VertexId>& leaves,
                               const domains::StamppProblem& problem);

} // namespace stamp::refine

#pragma once

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "stamp/common/rng.hpp"
#include "stamp/motion/cspace.hpp"

namespace stamp::motion {

struct Trajectory {
  std::vector<Config> waypoints;
  /// Maximum distance between consecutive waypoints.
  double resolution = 0.0;

  double length() const;
  bool empty() const { return waypoints.empty(); }
};

struct MotionProblem {
  const ConfigSpace* cspace = nullptr;
  Config start;
  Config goal;
  /// Obstacles the robot may overlap (e.g. the object being grasped).
  std::set<std::string> ignore_tags;
};

struct PlannerOptions {
  int iteration_budget = 10000;
  double step_fraction = 0.05;
  double goal_bias = 0.1;
  double resolution_fraction = 0.01;
};

struct InfeasibleReport {
  /// Obstacles most often hit by rejected extensions, most frequent first.
  std::vector<std::string> blocking_tags;
  int iterations = 0;
  std::string reason;
};

struct PlanResult {
  std::variant<Trajectory, InfeasibleReport> outcome;
  /// Iterations spent (work units).
  int iterations = 0;

  bool feasible() const { return std::holds_alternative<Trajectory>(outcome); }
  const Trajectory& trajectory() const { return std::get<Trajectory>(outcome); }
  const InfeasibleReport& report() const { return std::get<InfeasibleReport>(outcome); }
};

/// Bidirectional RRT with greedy connection. Deterministic given the rng
/// state and budget. Returned trajectories are densified to the certification
/// resolution and checked at every interpolation point.
PlanResult plan_motion(const MotionProblem& problem, Rng& rng, const PlannerOptions& options = {});

/// Points along the trajectory spaced at most `resolution` apart (endpoints included).
std::vector<Config> interpolate(const Trajectory& trajectory, double resolution);
std::vector<Config> interpolate_segment(const Config& a, const Config& b, double resolution);

/// Tags of obstacles overlapped by the footprint anywhere along the trajectory.
std::set<std::string> swept_tags(const ConfigSpace& cspace, const Trajectory& trajectory,
                                 const std::set<std::string>& ignore_tags = {});

/// Every interpolation point is in bounds and collision-free.
bool certify(const ConfigSpace& cspace, const Trajectory& trajectory, const std::set<std::string>& ignore_tags = {},
             double resolution = 0.0);

/// Straight line densified to `resolution`.
Trajectory straight_line(const Config& a, const Config& b, double resolution);

} // namespace stamp::motion

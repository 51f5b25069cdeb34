#pragma once

#include <string>
#include <vector>

#include "stamp/common/error.hpp"
#include "stamp/logic/region.hpp"

namespace stamp::anytime {

class AnytimeError : public Error {
public:
  using Error::Error;
};

class InvariantViolation : public AnytimeError {
public:
  using AnytimeError::AnytimeError;
};

struct PathPriorityEntry {
  std::string id;
  double probability = 0.0;
  double estimated_cost = 1.0;

  double ratio() const { return probability / estimated_cost; }
};

/// Product over symbolic arguments of max(1, measure of the argument's region).
/// Extensional regions count members; continuous measures are divided by
/// `workspace_measure`.
double estimate_cost(const std::vector<std::string>& symbolic_arguments, const logic::RepresentationFunction& rho,
                     double workspace_measure = 1.0);

/// Highest p / c; ties go to higher p, then the smaller id.
const PathPriorityEntry& select_path(const std::vector<PathPriorityEntry>& entries);

struct KnapsackItem {
  double probability = 0.0;
  double cost = 0.0;
};

struct CompletionInstant {
  double time = 0.0;
  double greedy_mass = 0.0;
  double optimal_mass = 0.0;
  bool holds() const { return greedy_mass >= optimal_mass / 2.0 - 1e-12; }
};

struct CoverageReport {
  /// Greedy refinement in ratio order; one entry per path finished within the budget.
  std::vector<CompletionInstant> instants;
  double greedy_mass = 0.0;
  double optimal_mass = 0.0;
  /// greedy >= opt / 2 at every completion instant.
  bool bound_holds = true;
};

inline constexpr std::size_t kMaxOraclePaths = 20;

/// Most probability mass refinable within `budget` (exhaustive over subsets).
double optimal_coverage(const std::vector<KnapsackItem>& items, double budget);

/// Runs greedy p/c refinement with constant true costs and compares it with
/// the exhaustive optimum at each completion instant and at the budget.
CoverageReport greedy_coverage_bound_check(const std::vector<KnapsackItem>& items, double budget);

struct CurvePoint {
  double elapsed_s = 0.0;
  double mass = 0.0;
  long long work_units = 0;
  int paths_refined = 0;
};

class AnytimeCurve {
public:
  const std::vector<CurvePoint>& points() const { return points_; }
  bool empty() const { return points_.empty(); }
  double last_mass() const { return points_.empty() ? 0.0 : points_.back().mass; }
  bool complete() const { return !points_.empty() && points_.back().mass >= 1.0 - 1e-9; }

  /// Throws InvariantViolation when time does not advance, mass decreases, or
  /// mass leaves [0, 1].
  void record(const CurvePoint& point);

private:
  std::vector<CurvePoint> points_;
};

AnytimeCurve record_snapshot(AnytimeCurve curve, double elapsed_s, double mass);

} // namespace stamp::anytime

#include "stamp/anytime/anytime.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>

namespace stamp::anytime {

double estimate_cost(const std::vector<std::string>& symbolic_arguments, const logic::RepresentationFunction& rho,
                     double workspace_measure) {
  if (workspace_measure <= 0.0) throw AnytimeError("workspace measure must be positive");
  double c = 1.0;
  for (const auto& arg : symbolic_arguments) {
    if (!rho.covers(arg)) throw AnytimeError("no region for symbolic argument '" + arg + "'");
    const auto& region = rho.region(arg);
    double m = logic::measure(region);
    if (!std::holds_alternative<logic::ExtensionalRegion>(region)) m /= workspace_measure;
    c *= std::max(1.0, m);
  }
  return c;
}

const PathPriorityEntry& select_path(const std::vector<PathPriorityEntry>& entries) {
  if (entries.empty()) throw AnytimeError("no paths to select from");
  const PathPriorityEntry* best = &entries.front();
  for (const auto& e : entries) {
    if (e.estimated_cost <= 0.0) throw AnytimeError("path '" + e.id + "' has nonpositive estimated cost");
    double r = e.ratio();
    double br = best->ratio();
    if (r > br || (r == br && (e.probability > best->probability ||
                               (e.probability == best->probability && e.id < best->id)))) {
      best = &e;
    }
  }
  return *best;
}

double optimal_coverage(const std::vector<KnapsackItem>& items, double budget) {
  if (items.size() > kMaxOraclePaths) {
    throw AnytimeError("exhaustive oracle supports at most " + std::to_string(kMaxOraclePaths) + " paths");
  }
  double best = 0.0;
  const std::size_t n = items.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double cost = 0.0;
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        cost += items[i].cost;
        mass += items[i].probability;
      }
    }
    if (cost <= budget + 1e-12) best = std::max(best, mass);
  }
  return best;
}

CoverageReport greedy_coverage_bound_check(const std::vector<KnapsackItem>& items, double budget) {
  if (items.size() > kMaxOraclePaths) {
    throw AnytimeError("exhaustive oracle supports at most " + std::to_string(kMaxOraclePaths) + " paths");
  }
  std::vector<PathPriorityEntry> entries;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].cost <= 0.0) throw AnytimeError("path costs must be positive");
    char id[16];
    std::snprintf(id, sizeof id, "%06zu", i);
    entries.push_back({id, items[i].probability, items[i].cost});
  }
  CoverageReport report;
  double time = 0.0;
  double mass = 0.0;
  while (!entries.empty()) {
    const auto& next = select_path(entries);
    if (time + next.estimated_cost > budget + 1e-12) break;
    time += next.estimated_cost;
    mass += next.probability;
    CompletionInstant instant{time, mass, optimal_coverage(items, time)};
    report.bound_holds = report.bound_holds && instant.holds();
    report.instants.push_back(instant);
    entries.erase(entries.begin() + (&next - entries.data()));
  }
  report.greedy_mass = mass;
  report.optimal_mass = optimal_coverage(items, budget);
  return report;
}

void AnytimeCurve::record(const CurvePoint& point) {
  if (!(point.mass >= -1e-12 && point.mass <= 1.0 + 1e-9)) {
    throw InvariantViolation("refined mass outside [0, 1]: " + std::to_string(point.mass));
  }
  if (!points_.empty()) {
    if (!(point.elapsed_s > points_.back().elapsed_s)) {
      throw InvariantViolation("snapshot time does not advance");
    }
    if (point.mass < points_.back().mass - 1e-12) {
      throw InvariantViolation("refined mass regressed from " + std::to_string(points_.back().mass) + " to " +
                               std::to_string(point.mass));
    }
  }
  points_.push_back(point);
}

AnytimeCurve record_snapshot(AnytimeCurve curve, double elapsed_s, double mass) {
  CurvePoint p;
  p.elapsed_s = elapsed_s;
  p.mass = mass;
  curve.record(p);
  return curve;
}

} // namespace stamp::anytime

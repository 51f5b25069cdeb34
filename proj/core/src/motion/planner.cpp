#include "stamp/motion/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

namespace stamp::motion {

double Trajectory::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) total += distance(waypoints[i - 1], waypoints[i]);
  return total;
}

std::vector<Config> interpolate_segment(const Config& a, const Config& b, double resolution) {
  double d = distance(a, b);
  int steps = resolution > 0.0 ? static_cast<int>(std::ceil(d / resolution)) : 1;
  steps = std::max(steps, 1);
  std::vector<Config> out;
  out.reserve(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    double s = static_cast<double>(i) / steps;
    Config c(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) c[k] = a[k] + s * (b[k] - a[k]);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Config> interpolate(const Trajectory& trajectory, double resolution) {
  std::vector<Config> out;
  const auto& w = trajectory.waypoints;
  if (w.empty()) return out;
  out.push_back(w.front());
  for (std::size_t i = 1; i < w.size(); ++i) {
    auto seg = interpolate_segment(w[i - 1], w[i], resolution);
    out.insert(out.end(), seg.begin() + 1, seg.end());
  }
  return out;
}

Trajectory straight_line(const Config& a, const Config& b, double resolution) {
  return Trajectory{interpolate_segment(a, b, resolution), resolution};
}

std::set<std::string> swept_tags(const ConfigSpace& cspace, const Trajectory& trajectory,
                                 const std::set<std::string>& ignore_tags) {
  std::set<std::string> tags;
  double res = trajectory.resolution > 0.0 ? trajectory.resolution : 0.01 * cspace.diagonal();
  for (const auto& c : interpolate(trajectory, res)) {
    if (!cspace.within_bounds(c)) continue;
    for (auto& t : colliding_tags(cspace, c, ignore_tags)) tags.insert(std::move(t));
  }
  return tags;
}

bool certify(const ConfigSpace& cspace, const Trajectory& trajectory, const std::set<std::string>& ignore_tags,
             double resolution) {
  if (resolution <= 0.0) resolution = 0.01 * cspace.diagonal();
  for (const auto& c : interpolate(trajectory, resolution)) {
    if (!cspace.within_bounds(c) || in_collision(cspace, c, ignore_tags)) return false;
  }
  return true;
}

namespace {

struct Node {
  Config q;
  int parent;
};

class Search {
public:
  Search(const MotionProblem& p, const PlannerOptions& o)
      : problem_(p), cspace_(*p.cspace), step_(o.step_fraction * cspace_.diagonal()),
        resolution_(o.resolution_fraction * cspace_.diagonal()) {}

  // First colliding point along a->b, or nullopt when the segment is free.
  std::optional<std::vector<std::string>> blocked(const Config& a, const Config& b) const {
    for (const auto& c : interpolate_segment(a, b, resolution_)) {
      auto tags = colliding_tags(cspace_, c, problem_.ignore_tags);
      if (!tags.empty()) return tags;
    }
    return std::nullopt;
  }

  static int nearest(const std::vector<Node>& tree, const Config& q) {
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tree.size(); ++i) {
      double d = distance(tree[i].q, q);
      if (d < bd) {
        bd = d;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  Config steer(const Config& from, const Config& to) const {
    double d = distance(from, to);
    if (d <= step_) return to;
    Config out(from.size());
    for (std::size_t k = 0; k < from.size(); ++k) out[k] = from[k] + (to[k] - from[k]) * step_ / d;
    return out;
  }

  enum class Status { Trapped, Advanced, Reached };

  Status extend(std::vector<Node>& tree, const Config& q) {
    int n = nearest(tree, q);
    Config next = steer(tree[n].q, q);
    if (auto tags = blocked(tree[n].q, next)) {
      for (const auto& t : *tags) ++hits_[t];
      return Status::Trapped;
    }
    tree.push_back({next, n});
    return distance(next, q) == 0.0 ? Status::Reached : Status::Advanced;
  }

  Status connect(std::vector<Node>& tree, const Config& q) {
    Status s = Status::Advanced;
    while (s == Status::Advanced) s = extend(tree, q);
    return s;
  }

  std::vector<std::string> ranked_tags() const {
    std::vector<std::pair<std::string, int>> v(hits_.begin(), hits_.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    std::vector<std::string> out;
    for (auto& [t, c] : v) out.push_back(t);
    return out;
  }

  void note(const std::vector<std::string>& tags) {
    for (const auto& t : tags) ++hits_[t];
  }

  double resolution() const { return resolution_; }

private:
  const MotionProblem& problem_;
  const ConfigSpace& cspace_;
  double step_;
  double resolution_;
  std::map<std::string, int> hits_;
};

std::vector<Config> trace(const std::vector<Node>& tree, int i) {
  std::vector<Config> out;
  for (; i >= 0; i = tree[i].parent) out.push_back(tree[i].q);
  return out;
}

} // namespace

PlanResult plan_motion(const MotionProblem& problem, Rng& rng, const PlannerOptions& options) {
  if (!problem.cspace) throw MotionError("motion problem has no configuration space");
  const ConfigSpace& cs = *problem.cspace;
  if (!cs.within_bounds(problem.start) || !cs.within_bounds(problem.goal)) {
    throw MotionError("motion problem endpoints out of bounds");
  }
  Search search(problem, options);
  PlanResult result;

  auto start_tags = colliding_tags(cs, problem.start, problem.ignore_tags);
  auto goal_tags = colliding_tags(cs, problem.goal, problem.ignore_tags);
  if (!start_tags.empty() || !goal_tags.empty()) {
    search.note(start_tags);
    search.note(goal_tags);
    result.outcome = InfeasibleReport{search.ranked_tags(), 0,
                                      start_tags.empty() ? "goal in collision" : "start in collision"};
    return result;
  }

  auto finish = [&](std::vector<Config> path, int iterations) {
    Trajectory raw{std::move(path), 0.0};
    Trajectory t{interpolate(raw, search.resolution()), search.resolution()};
    result.iterations = iterations;
    result.outcome = std::move(t);
    return result;
  };

  if (!search.blocked(problem.start, problem.goal)) return finish({problem.start, problem.goal}, 1);

  std::vector<Node> a{{problem.start, -1}};
  std::vector<Node> b{{problem.goal, -1}};
  bool a_is_start = true;
  for (int it = 1; it <= options.iteration_budget; ++it) {
    Config q;
    if (rng.bernoulli(options.goal_bias)) {
      q = b.front().q;
    } else {
      q.resize(cs.dimension());
      for (std::size_t k = 0; k < q.size(); ++k) q[k] = rng.uniform(cs.lo()[k], cs.hi()[k]);
    }
    if (search.extend(a, q) != Search::Status::Trapped) {
      const Config reached = a.back().q;
      if (search.connect(b, reached) == Search::Status::Reached) {
        auto pa = trace(a, static_cast<int>(a.size()) - 1);
        auto pb = trace(b, static_cast<int>(b.size()) - 1);
        std::reverse(pa.begin(), pa.end());
        pa.insert(pa.end(), pb.begin() + 1, pb.end());
        if (!a_is_start) std::reverse(pa.begin(), pa.end());
        return finish(std::move(pa), it);
      }
    }
    std::swap(a, b);
    a_is_start = !a_is_start;
  }
  result.iterations = options.iteration_budget;
  result.outcome = InfeasibleReport{search.ranked_tags(), options.iteration_budget, "iteration budget exhausted"};
  return result;
}

} // namespace stamp::motion

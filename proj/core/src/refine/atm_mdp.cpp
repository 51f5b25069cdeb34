#include "stamp/refine/atm_mdp.hpp"

#include <chrono>
#include <cmath>

namespace stamp::refine {

namespace {

class Clock {
public:
  Clock(const AtmOptions& options, const domains::Work& work)
      : options_(options), work_(work), start_(std::chrono::steady_clock::now()) {}

  double now() const {
    if (options_.virtual_clock) return static_cast<double>(work_.units()) * options_.seconds_per_unit;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  const AtmOptions& options_;
  const domains::Work& work_;
  std::chrono::steady_clock::time_point start_;
};

} // namespace

AtmResult atm_mdp(const domains::StamppProblem& problem, const AtmOptions& options) {
  AtmResult result;
  SolveSettings settings;
  settings.horizon_cap = options.horizon_cap;
  result.prg = init_prg(problem, settings);
  Rng rng(options.seed);
  BroadeningSearch search;
  Clock clock(options, result.work);
  auto& prg = result.prg;
  double last_time = -1.0;

  auto emit = [&](NodeId id) {
    const auto& node = prg.node(id);
    const double mass = node.refined_mass();
    if (mass <= result.mass) return;
    Snapshot s;
    s.index = static_cast<int>(result.snapshots.size());
    s.elapsed_s = std::max(clock.now(), std::nextafter(last_time, 1e300));
    s.work_units = result.work.units();
    s.paths_refined = static_cast<int>(node.refined.size());
    s.mass = mass;
    s.node = id;
    for (const auto& [leaf, at] : node.refined) s.refined.insert(leaf);
    last_time = s.elapsed_s;
    result.curve.record({s.elapsed_s, std::min(mass, 1.0), s.work_units, s.paths_refined});
    result.mass = mass;
    result.best = id;
    result.snapshots.push_back(std::move(s));
  };

  auto stamp_fresh = [&](PrgNode& node, const std::vector<VertexId>& fresh) {
    for (VertexId leaf : fresh) node.refined[leaf] = static_cast<int>(result.snapshots.size());
    for (auto& [leaf, at] : node.refined) {
      if (at < 0) at = static_cast<int>(result.snapshots.size());
    }
  };

  while (true) {
    if (clock.now() >= options.deadline_s || result.work.units() >= options.work_budget) break;
    auto picked = get_pr_node(prg, search);
    if (!picked) break;
    const NodeId u = *picked;
    auto path = get_unrefined_path(prg.node(u), problem);
    if (!path) {
      emit(u);
      result.complete = prg.node(u).refined_mass() >= 1.0 - 1e-9;
      if (result.complete) {
        result.best = u;
        break;
      }
      // Nothing left to refine but mass is missing: treat as a dead node.
      prg.node(u).dead = true;
      continue;
    }
    ++result.stats.iterations;
    result.work.samples += 1;

    if (rng.bernoulli(options.compute_prob) && prg.node(u).pending) {
      Failure failure = *prg.node(u).pending;
      prg.node(u).pending.reset();
      NodeId v = update_abstraction(prg, u, failure, problem, rng, settings);
      ++result.stats.updates;
      stamp_fresh(prg.node(v), {});
      if (!prg.node(v).dead) emit(v);
      continue;
    }

    ++result.stats.concretizations;
    auto& node = prg.node(u);
    auto outcome =
        concretize_path(node, *path, problem, rng, options.limits, options.explore_prob, result.work, settings);
    if (auto* ok = std::get_if<Feasible>(&outcome)) {
      ++result.stats.feasible;
      auto fresh = commit(node, ok->sigma, problem, rng);
      stamp_fresh(node, fresh);
      emit(u);
    } else if (auto* bad = std::get_if<Failed>(&outcome)) {
      ++result.stats.failed;
      node.pending = bad->failure;
    } else if (std::holds_alternative<Explored>(outcome)) {
      ++result.stats.explored;
    } else {
      ++result.stats.exhausted;
    }
  }
  result.elapsed_s = clock.now();
  if (!result.snapshots.empty()) {
    result.complete = result.snapshots.back().mass >= 1.0 - 1e-9;
  }
  return result;
}

} // namespace stamp::refine

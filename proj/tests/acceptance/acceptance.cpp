// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "../support/random_ssp.hpp"
#include "stamp/anytime/anytime.hpp"
#include "stamp/cli/run.hpp"
#include "stamp/common/rng.hpp"
#include "stamp/domains/builtin.hpp"
#include "stamp/domains/problem.hpp"
#include "stamp/refine/atm_mdp.hpp"
#include "stamp/ssp/value_iteration.hpp"

using namespace stamp;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

domains::StamppProblem fixture(const std::string& name) {
  return domains::load_problem_file(std::string(STAMP_DATA_DIR) + "/" + name);
}

refine::AtmOptions virtual_run(std::uint64_t seed) {
  refine::AtmOptions o;
  o.deadline_s = 300.0;
  o.virtual_clock = true;
  o.seed = seed;
  return o;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Run {
  std::string name;
  std::uint64_t seed;
  domains::StamppProblem problem;
  refine::AtmResult result;
};

// Criterion 3's runs, shared with criteria 5 and 7.
std::vector<Run>& anytime_runs() {
  static std::vector<Run> runs = [] {
    std::vector<Run> out;
    for (auto name : {"cluttered_table_3.json", "domino_6_2.json", "aircraft_3.json"}) {
      auto p = fixture(name);
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto r = refine::atm_mdp(p, virtual_run(seed));
        out.push_back({name, seed, p, std::move(r)});
      }
    }
    return out;
  }();
  return runs;
}

Verdict value_iteration_oracle() {
  auto start = std::chrono::steady_clock::now();
  Rng rng(20240601);
  int matched = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    auto m = testing::random_explicit_ssp(rng, 20, 4, 5);
    double v = ssp::value_iteration(testing::to_model(m)).initial_value();
    double err = std::abs(v - testing::expectimin(m, 0, 0));
    worst = std::max(worst, err);
    matched += err <= 1e-9;
  }
  double t = seconds_since(start);
  return {matched == 50 && t < 10.0, fmt("%d/50 within 1e-9, max error %.3g, %.2f s", matched, worst, t)};
}

Verdict greedy_bound() {
  auto start = std::chrono::steady_clock::now();
  Rng rng(777);
  int violations = 0;
  int instants = 0;
  double worst_ratio = INFINITY;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng.index(12);
    std::vector<anytime::KnapsackItem> items(n);
    double total = 0.0;
    for (auto& it : items) {
      it.probability = rng.uniform(0.01, 1.0);
      it.cost = rng.uniform(0.1, 10.0);
      total += it.probability;
    }
    for (auto& it : items) it.probability /= total;
    auto report = anytime::greedy_coverage_bound_check(items, rng.uniform(0.0, 40.0));
    for (const auto& inst : report.instants) {
      ++instants;
      if (!inst.holds()) ++violations;
      if (inst.optimal_mass > 0) worst_ratio = std::min(worst_ratio, inst.greedy_mass / inst.optimal_mass);
    }
  }
  double t = seconds_since(start);
  return {violations == 0 && t < 30.0,
          fmt("%d violations over %d completion instants, min greedy/opt %.3f, %.2f s", violations, instants,
              worst_ratio, t)};
}

Verdict monotone_completion() {
  int ok = 0;
  std::string failures;
  for (const auto& run : anytime_runs()) {
    bool good = run.result.complete && !run.result.snapshots.empty() &&
                std::abs(run.result.snapshots.back().mass - 1.0) < 1e-9;
    for (std::size_t i = 1; i < run.result.snapshots.size(); ++i) {
      good = good && run.result.snapshots[i].mass >= run.result.snapshots[i - 1].mass &&
             run.result.snapshots[i].elapsed_s > run.result.snapshots[i - 1].elapsed_s;
    }
    good = good && run.result.elapsed_s <= 300.0;
    ok += good;
    if (!good) failures += fmt(" %s/seed%llu", run.name.c_str(), static_cast<unsigned long long>(run.seed));
  }
  const int total = static_cast<int>(anytime_runs().size());
  return {ok == total, fmt("%d/%d runs monotone and complete within 300 s virtual%s", ok, total, failures.c_str())};
}

Verdict eighty_thirty() {
  std::vector<double> fractions;
  std::string raw;
  for (const auto& run : anytime_runs()) {
    if (run.name != "domino_6_2.json") continue;
    auto s = cli::summarize(run.name, cli::csv_rows(run.result));
    double f = s.t80_s ? s.fraction : 1.0;
    fractions.push_back(f);
    raw += fmt(" %.3f", f);
  }
  double med = cli::median(fractions);
  return {fractions.size() == 5 && med <= 0.5, fmt("median t80 fraction %.3f (raw:%s)", med, raw.c_str())};
}

Verdict contingency_count() {
  int pickups = 0;
  int wrong = 0;
  auto check_tree = [&](const ssp::PolicyTree& tree) {
    for (const auto& [id, v] : tree.vertices()) {
      if (!v.action || v.action->schema.rfind("pickup_", 0) != 0) continue;
      ++pickups;
      if (v.children.size() != 16) ++wrong;
    }
  };
  for (int n : {5, 6, 8, 10}) {
    auto p = domains::make_domino(n, 2);
    auto prg = refine::init_prg(p);
    check_tree(prg.node(0).tree);
  }
  for (const auto& run : anytime_runs()) {
    if (run.name == "domino_6_2.json") {
      for (const auto& node : run.result.prg.nodes()) check_tree(node.tree);
    }
  }
  return {pickups > 0 && wrong == 0, fmt("%d pickup vertices, %d without exactly 16 outcome edges", pickups, wrong)};
}

Verdict outcome_frequency() {
  auto p = fixture("place.json");
  auto r = refine::atm_mdp(p, virtual_run(0));
  if (!r.complete) return {false, "place policy did not refine fully"};
  auto report = cli::simulate(cli::make_policy(p, r), 10000, 31337);
  const auto& counts = report.outcome_counts.at("place");
  int n = 0;
  for (const auto& [label, k] : counts) n += k;
  const double fraction = counts.count("success") ? static_cast<double>(counts.at("success")) / n : 0.0;
  return {n >= 10000 && fraction >= 0.788 && fraction <= 0.812,
          fmt("success fraction %.4f over %d place executions in 10000 episodes", fraction, n)};
}

Verdict snapshot_soundness() {
  int snapshots = 0;
  int paths = 0;
  std::size_t violations = 0;
  std::string first;
  for (const auto& run : anytime_runs()) {
    for (const auto& s : run.result.snapshots) {
      ++snapshots;
      paths += static_cast<int>(s.refined.size());
      auto v = refine::audit(run.result.prg.node(s.node), s.refined, run.problem);
      if (!v.empty() && first.empty()) first = "; first: " + v.front();
      violations += v.size();
    }
  }
  return {violations == 0 && snapshots > 0,
          fmt("%zu violations over %d refined paths in %d snapshots%s", violations, paths, snapshots, first.c_str())};
}

Verdict unresolved_decay() {
  auto p = fixture("cluttered_table_4.json");
  auto r = refine::atm_mdp(p, virtual_run(0));
  if (!r.complete) return {false, "run did not reach mass 1.0"};
  auto policy = cli::make_policy(p, r);
  bool pass = true;
  double last = 1.0;
  std::string detail;
  for (double target : {0.25, 0.5, 0.75, 1.0}) {
    const refine::Snapshot* chosen = nullptr;
    for (const auto& s : r.snapshots) {
      if (s.mass >= target - 1e-9) {
        chosen = &s;
        break;
      }
    }
    if (!chosen) return {false, fmt("no snapshot reaches mass %.2f", target)};
    auto report = cli::simulate(policy, 1000, 4242, chosen->index);
    const double expected = 1.0 - chosen->mass;
    const double sigma = std::sqrt(expected * (1.0 - expected) / 1000.0);
    const bool within = std::abs(report.unresolved_rate - expected) <= 3.0 * sigma + 1e-12;
    pass = pass && within && report.unresolved_rate <= last;
    last = report.unresolved_rate;
    detail += fmt(" [target %.2f, snapshot mass %.4f: rate %.3f, expected %.3f +- %.3f]", target, chosen->mass, report.unresolved_rate, expected,
                  3 * sigma);
  }
  return {pass, "rates" + detail};
}

Verdict abstraction_progress() {
  auto p = fixture("blocked_table.json");
  int ok = 0;
  int collision_edges = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto r = refine::atm_mdp(p, virtual_run(seed));
    int edges = 0;
    for (const auto& e : r.prg.edges()) {
      for (const auto& a : e.failed) edges += a.relation == "Collision";
    }
    collision_edges += edges;
    ok += r.complete && edges >= 1;
  }
  return {ok == 5, fmt("%d/5 seeds with a Collision-labelled edge and mass 1.0 (%d such atoms)", ok, collision_edges)};
}

Verdict completeness_trend() {
  auto p = fixture("blocked_table.json");
  std::vector<int> successes;
  std::string detail;
  for (long long budget : {500LL, 2000LL, 8000LL}) {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      auto o = virtual_run(seed);
      o.explore_prob = 0.05;
      o.work_budget = budget;
      o.deadline_s = 1e9;
      ok += refine::atm_mdp(p, o).complete;
    }
    successes.push_back(ok);
    detail += fmt(" %lld:%d/50", budget, ok);
  }
  bool pass = successes[0] <= successes[1] && successes[1] <= successes[2] && successes[2] == 50;
  return {pass, "successes by budget" + detail};
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"value-iteration oracle equivalence", value_iteration_oracle},
      {"greedy anytime half-optimum bound", greedy_bound},
      {"anytime monotonicity and completion", monotone_completion},
      {"80% mass within 50% of refinement time", eighty_thirty},
      {"domino contingency count", contingency_count},
      {"place outcome frequency", outcome_frequency},
      {"snapshot soundness", snapshot_soundness},
      {"unresolved-contingency decay", unresolved_decay},
      {"abstraction-update progress", abstraction_progress},
      {"completeness trend", completeness_trend},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

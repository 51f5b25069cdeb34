#include <benchmark/benchmark.h>

#include "stamp/common/rng.hpp"
#include "stamp/domains/builtin.hpp"
#include "stamp/motion/cspace.hpp"
#include "stamp/motion/planner.hpp"
#include "stamp/refine/atm_mdp.hpp"
#include "stamp/ssp/value_iteration.hpp"

using namespace stamp;

namespace {

ssp::SolveOptions penalize() {
  ssp::SolveOptions o;
  o.dead_ends = ssp::DeadEnds::Penalize;
  return o;
}

} // namespace

static void BM_ValueIterationDomino(benchmark::State& state) {
  auto p = domains::make_domino(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(ssp::value_iteration(p.abstract_model, penalize()).initial_value());
}
BENCHMARK(BM_ValueIterationDomino)->Arg(6)->Arg(10);

static void BM_ValueIterationClutter(benchmark::State& state) {
  auto p = domains::make_cluttered_table(static_cast<int>(state.range(0)), 0.34, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(ssp::value_iteration(p.abstract_model, penalize()).initial_value());
}
BENCHMARK(BM_ValueIterationClutter)->Arg(3)->Arg(8);

static void BM_PlanMotionNarrowGap(benchmark::State& state) {
  motion::ConfigSpace cs({0.0, 0.0}, {1.0, 1.0}, motion::Disc{{0, 0}, 0.1});
  cs.add_obstacle("lo", motion::rectangle({0.45, 0.0}, {0.55, 0.35}));
  cs.add_obstacle("hi", motion::rectangle({0.45, 0.65}, {0.55, 1.0}));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++);
    benchmark::DoNotOptimize(motion::plan_motion({&cs, {0.15, 0.15}, {0.85, 0.85}, {}}, rng).iterations);
  }
}
BENCHMARK(BM_PlanMotionNarrowGap);

static void BM_AtmMdp(benchmark::State& state, domains::DomainSpec spec) {
  auto p = domains::build_problem(spec);
  refine::AtmOptions o;
  o.deadline_s = 300;
  o.virtual_clock = true;
  for (auto _ : state) {
    auto r = refine::atm_mdp(p, o);
    benchmark::DoNotOptimize(r.mass);
  }
}
BENCHMARK_CAPTURE(BM_AtmMdp, cluttered3, domains::builtin_spec("cluttered_table", {{"n", "3"}, {"crush", "0.5"}}));
BENCHMARK_CAPTURE(BM_AtmMdp, domino62, domains::builtin_spec("domino", {{"n", "6"}, {"k", "2"}}));
BENCHMARK_CAPTURE(BM_AtmMdp, blocked, domains::builtin_spec("blocked_table", {}));
BENCHMARK_CAPTURE(BM_AtmMdp, aircraft3, domains::builtin_spec("aircraft", {{"sites", "3"}}));
BENCHMARK_MAIN();

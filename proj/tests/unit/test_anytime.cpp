#include <gtest/gtest.h>

#include <functional>

#include "stamp/anytime/anytime.hpp"
#include "stamp/common/rng.hpp"

using namespace stamp;
using namespace stamp::anytime;

namespace {

// Recursive include/exclude enumeration, independent of the bitmask oracle.
double best_subset(const std::vector<KnapsackItem>& items, double budget) {
  std::function<double(std::size_t, double)> go = [&](std::size_t i, double left) -> double {
    if (i == items.size()) return 0.0;
    double skip = go(i + 1, left);
    if (items[i].cost <= left + 1e-12) return std::max(skip, items[i].probability + go(i + 1, left - items[i].cost));
    return skip;
  };
  return go(0, budget);
}

std::vector<KnapsackItem> random_instance(Rng& rng, std::size_t n) {
  std::vector<KnapsackItem> items(n);
  double total = 0.0;
  for (auto& it : items) {
    it.probability = rng.uniform(0.01, 1.0);
    it.cost = rng.uniform(0.1, 10.0);
    total += it.probability;
  }
  for (auto& it : items) it.probability /= total;
  return items;
}

} // namespace

TEST(EstimateCost, EmptyProductIsOne) { EXPECT_EQ(estimate_cost({}, logic::RepresentationFunction{}), 1.0); }

TEST(EstimateCost, ProductOfCardinalities) {
  logic::RepresentationFunction rho;
  rho.set("grasps", logic::ExtensionalRegion{{"g1", "g2", "g3"}});
  rho.set("poses", logic::ExtensionalRegion{{"p1", "p2", "p3", "p4"}});
  EXPECT_EQ(estimate_cost({"grasps", "poses"}, rho), 12.0);
}

TEST(EstimateCost, ContinuousRegionFloorsAtOne) {
  logic::RepresentationFunction rho;
  rho.set("zone", logic::BoxRegion{{0.0, 0.0}, {0.5, 0.5}});
  EXPECT_EQ(estimate_cost({"zone"}, rho), 1.0);
  rho.set("wide", logic::BoxRegion{{0.0, 0.0}, {4.0, 1.0}});
  EXPECT_DOUBLE_EQ(estimate_cost({"wide"}, rho), 4.0);
  EXPECT_DOUBLE_EQ(estimate_cost({"wide"}, rho, 2.0), 2.0);
}

TEST(EstimateCost, MissingRegionThrows) {
  EXPECT_THROW(estimate_cost({"nowhere"}, logic::RepresentationFunction{}), AnytimeError);
}

TEST(SelectPath, HigherRatioWins) {
  std::vector<PathPriorityEntry> e{{"a", 0.8, 4.0}, {"b", 0.1, 0.25}};
  EXPECT_EQ(select_path(e).id, "b");
}

TEST(SelectPath, SingleEntry) {
  std::vector<PathPriorityEntry> e{{"only", 0.3, 7.0}};
  EXPECT_EQ(select_path(e).id, "only");
}

TEST(SelectPath, TiesPreferHigherProbabilityThenId) {
  std::vector<PathPriorityEntry> e{{"a", 0.3, 1.0}, {"b", 0.6, 2.0}};
  EXPECT_EQ(select_path(e).id, "b");
  std::vector<PathPriorityEntry> f{{"z", 0.5, 1.0}, {"m", 0.5, 1.0}};
  EXPECT_EQ(select_path(f).id, "m");
}

TEST(SelectPath, EmptyThrows) { EXPECT_THROW(select_path({}), AnytimeError); }

TEST(SelectPath, InvariantUnderCostScaling) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PathPriorityEntry> e;
    const int n = 1 + static_cast<int>(rng.index(8));
    for (int i = 0; i < n; ++i) e.push_back({"p" + std::to_string(i), rng.uniform(0.01, 1.0), rng.uniform(1.0, 50.0)});
    const auto chosen = select_path(e).id;
    const double k = rng.uniform(0.01, 100.0);
    for (auto& x : e) x.estimated_cost *= k;
    EXPECT_EQ(select_path(e).id, chosen);
  }
}

TEST(Coverage, AmpleBudgetCoversEverything) {
  std::vector<KnapsackItem> items{{0.5, 1.0}, {0.3, 2.0}, {0.2, 3.0}};
  auto r = greedy_coverage_bound_check(items, 6.0);
  EXPECT_NEAR(r.greedy_mass, 1.0, 1e-12);
  EXPECT_NEAR(r.optimal_mass, 1.0, 1e-12);
  EXPECT_TRUE(r.bound_holds);
}

TEST(Coverage, ZeroBudget) {
  auto r = greedy_coverage_bound_check({{0.5, 1.0}, {0.5, 1.0}}, 0.0);
  EXPECT_EQ(r.greedy_mass, 0.0);
  EXPECT_EQ(r.optimal_mass, 0.0);
  EXPECT_TRUE(r.instants.empty());
}

TEST(Coverage, GreedyTrapInstance) {
  std::vector<KnapsackItem> items{{0.6, 1.0}, {0.59, 0.58}, {0.41, 0.42}};
  auto r = greedy_coverage_bound_check(items, 1.0);
  // Ratio order is 0.41/0.42 > 0.59/0.58 > 0.6; the first two fill the budget exactly.
  ASSERT_EQ(r.instants.size(), 2u);
  EXPECT_NEAR(r.greedy_mass, 1.0, 1e-12);
  EXPECT_NEAR(r.optimal_mass, best_subset(items, 1.0), 1e-12);
  EXPECT_GE(r.greedy_mass, r.optimal_mass / 2);
}

TEST(Coverage, TooManyPathsThrows) {
  std::vector<KnapsackItem> items(21, {0.01, 1.0});
  EXPECT_THROW(greedy_coverage_bound_check(items, 1.0), AnytimeError);
  EXPECT_THROW(optimal_coverage(items, 1.0), AnytimeError);
}

TEST(Coverage, OracleAgreesWithRecursiveEnumeration) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto items = random_instance(rng, 1 + rng.index(10));
    const double budget = rng.uniform(0.0, 30.0);
    EXPECT_NEAR(optimal_coverage(items, budget), best_subset(items, budget), 1e-12);
  }
}

TEST(Coverage, HalfOptimumAtEveryCompletionInstant) {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    auto items = random_instance(rng, 1 + rng.index(12));
    const double budget = rng.uniform(0.0, 40.0);
    auto r = greedy_coverage_bound_check(items, budget);
    EXPECT_TRUE(r.bound_holds);
    for (const auto& inst : r.instants) {
      EXPECT_GE(inst.greedy_mass, best_subset(items, inst.time) / 2 - 1e-12);
    }
  }
}

TEST(Curve, RecordsAndCompletes) {
  AnytimeCurve c;
  c = record_snapshot(c, 0.5, 0.2);
  EXPECT_EQ(c.points().size(), 1u);
  EXPECT_FALSE(c.complete());
  c = record_snapshot(c, 0.7, 1.0);
  EXPECT_TRUE(c.complete());
}

TEST(Curve, RejectsTimeGoingBackwards) {
  auto c = record_snapshot({}, 0.5, 0.2);
  EXPECT_THROW(record_snapshot(c, 0.4, 0.3), InvariantViolation);
  EXPECT_THROW(record_snapshot(c, 0.5, 0.3), InvariantViolation);
}

TEST(Curve, RejectsMassRegressionAndRange) {
  auto c = record_snapshot({}, 0.5, 0.4);
  EXPECT_THROW(record_snapshot(c, 0.6, 0.3), InvariantViolation);
  EXPECT_THROW(record_snapshot(c, 0.6, 1.5), InvariantViolation);
  EXPECT_THROW(record_snapshot({}, 0.1, -0.2), InvariantViolation);
}

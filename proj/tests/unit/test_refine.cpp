#include <gtest/gtest.h>

#include <cmath>

#include "stamp/anytime/anytime.hpp"
#include "stamp/common/rng.hpp"
#include "stamp/domains/builtin.hpp"
#include "stamp/domains/problem.hpp"
#include "stamp/refine/atm_mdp.hpp"
#include "stamp/refine/concretize.hpp"
#include "stamp/refine/prg.hpp"

using namespace stamp;
using namespace stamp::refine;
using domains::StamppProblem;

namespace {

StamppProblem fixture(const std::string& name) {
  return domains::load_problem_file(std::string(STAMP_DATA_DIR) + "/" + name);
}

AtmOptions virtual_options(std::uint64_t seed) {
  AtmOptions o;
  o.deadline_s = 300;
  o.virtual_clock = true;
  o.seed = seed;
  return o;
}

AtmOptions deadline(double seconds) {
  AtmOptions o;
  o.deadline_s = seconds;
  return o;
}

AtmOptions budget(long long units) {
  auto o = virtual_options(0);
  o.work_budget = units;
  return o;
}

const ssp::Vertex& root(const PrgNode& n) { return n.tree.vertex(n.tree.root()); }

PrgNode copy_for_child(const Prg& prg) {
  PrgNode c = prg.node(0);
  c.children.clear();
  return c;
}

// First Failed outcome from repeated attempts on the node's paths.
std::optional<Failure> find_failure(PrgNode& node, const StamppProblem& problem, Rng& rng) {
  domains::Work work;
  for (int i = 0; i < 50; ++i) {
    auto path = get_unrefined_path(node, problem);
    if (!path) return std::nullopt;
    auto out = concretize_path(node, *path, problem, rng, {}, 0.0, work);
    if (auto* f = std::get_if<Failed>(&out)) return f->failure;
  }
  return std::nullopt;
}

} // namespace

TEST(InitPrg, GoalAtStartGivesBareRoot) {
  domains::DomainSpec spec;
  spec.name = "trivial";
  auto prg = init_prg(domains::build_problem(spec));
  ASSERT_EQ(prg.size(), 1u);
  EXPECT_EQ(prg.node(0).tree.size(), 1u);
  EXPECT_EQ(root(prg.node(0)).leaf, ssp::LeafKind::Goal);
}

TEST(InitPrg, PlaceSplitsAtPlaceAction) {
  auto p = fixture("place.json");
  auto prg = init_prg(p);
  const auto& tree = prg.node(0).tree;
  const auto& r = root(prg.node(0));
  ASSERT_TRUE(r.action);
  EXPECT_EQ(r.action->schema, "pickup");
  ASSERT_EQ(r.children.size(), 1u);
  const auto& place = tree.vertex(r.children[0]);
  ASSERT_TRUE(place.action);
  EXPECT_EQ(place.action->schema, "place");
  ASSERT_EQ(place.children.size(), 2u);
  EXPECT_DOUBLE_EQ(tree.vertex(place.children[0]).edge_probability, 0.8);
  EXPECT_DOUBLE_EQ(tree.vertex(place.children[1]).edge_probability, 0.2);
}

TEST(InitPrg, DominoPickupBranchesFourWays) {
  auto prg = init_prg(domains::make_domino(3, 1));
  const auto& r = root(prg.node(0));
  ASSERT_TRUE(r.action);
  EXPECT_EQ(r.action->schema, "pickup_d1");
  EXPECT_EQ(r.children.size(), 4u);
}

TEST(InitPrg, InitialWorldIsAttachedToRoot) {
  auto p = fixture("cluttered_table_3.json");
  auto prg = init_prg(p);
  const auto& n = prg.node(0);
  ASSERT_TRUE(n.sigma.count(n.tree.root()));
  EXPECT_EQ(n.sigma.at(n.tree.root()).world, p.initial_world);
  EXPECT_FALSE(n.has_partial_concretization());
  EXPECT_EQ(n.refined_mass(), 0.0);
}

TEST(Broadening, SingleNode) {
  auto prg = init_prg(fixture("place.json"));
  BroadeningSearch search;
  EXPECT_EQ(get_pr_node(prg, search), NodeId{0});
}

TEST(Broadening, CapLimitsVisitedChildrenThenWidens) {
  auto prg = init_prg(fixture("place.json"));
  for (int i = 0; i < 7; ++i) prg.add_node(copy_for_child(prg), 0);
  auto order = dfs_order(prg, 5);
  EXPECT_EQ(order.size(), 6u);
  EXPECT_EQ(std::count(order.begin(), order.end(), NodeId{1}), 0);
  EXPECT_EQ(std::count(order.begin(), order.end(), NodeId{2}), 0);

  BroadeningSearch search;
  auto first = get_pr_node(prg, search);
  ASSERT_TRUE(first);
  EXPECT_NE(*first, NodeId{0});
  EXPECT_EQ(search.breadth(), 5);
  for (NodeId id : order) {
    if (id != 0) prg.node(id).dead = true;
  }
  auto next = get_pr_node(prg, search);
  EXPECT_EQ(search.breadth(), 10);
  ASSERT_TRUE(next);
  EXPECT_TRUE(*next == 1 || *next == 2);
}

TEST(Broadening, AllDeadGivesNothing) {
  auto prg = init_prg(fixture("place.json"));
  prg.node(0).dead = true;
  BroadeningSearch search;
  EXPECT_FALSE(get_pr_node(prg, search));
}

TEST(UnrefinedPath, SinglePathTree) {
  auto p = domains::make_cluttered_table(1, 1.0, 0.0, 0.0);
  auto prg = init_prg(p);
  auto paths = prg.node(0).tree.paths();
  ASSERT_EQ(paths.size(), 1u);
  auto chosen = get_unrefined_path(prg.node(0), p);
  ASSERT_TRUE(chosen);
  EXPECT_EQ(chosen->vertices, paths[0].vertices);
}

TEST(UnrefinedPath, MaximizesProbabilityOverCost) {
  for (auto name : {"domino_6_2.json", "place.json", "aircraft_3.json"}) {
    auto p = fixture(name);
    auto prg = init_prg(p);
    const auto& node = prg.node(0);
    double best = 0.0;
    for (const auto& path : node.tree.paths()) {
      std::vector<std::string> symbols;
      for (VertexId v : path.vertices) {
        if (node.tree.vertex(v).action) {
          for (auto& s : p.engine->symbolic_arguments(*node.tree.vertex(v).action)) symbols.push_back(s);
        }
      }
      best = std::max(best, path.probability / anytime::estimate_cost(symbols, p.rho, p.workspace_measure));
    }
    auto chosen = get_unrefined_path(node, p);
    ASSERT_TRUE(chosen);
    std::vector<std::string> symbols;
    for (VertexId v : chosen->vertices) {
      if (node.tree.vertex(v).action) {
        for (auto& s : p.engine->symbolic_arguments(*node.tree.vertex(v).action)) symbols.push_back(s);
      }
    }
    EXPECT_DOUBLE_EQ(chosen->probability / anytime::estimate_cost(symbols, p.rho, p.workspace_measure), best)
        << name;
  }
}

TEST(UnrefinedPath, CompletedNodeHasNone) {
  auto p = fixture("cluttered_table_3.json");
  auto r = atm_mdp(p, virtual_options(1));
  ASSERT_TRUE(r.complete);
  const auto& best = r.prg.node(r.best);
  EXPECT_FALSE(get_unrefined_path(best, p));
  EXPECT_NEAR(best.refined_mass(), 1.0, 1e-9);
}

TEST(Concretize, FeasibleWhenNothingBlocks) {
  auto p = fixture("place.json");
  auto prg = init_prg(p);
  auto& node = prg.node(0);
  Rng rng(1);
  domains::Work work;
  auto path = get_unrefined_path(node, p);
  ASSERT_TRUE(path);
  auto out = concretize_path(node, *path, p, rng, {}, 0.0, work);
  ASSERT_TRUE(std::holds_alternative<Feasible>(out));
  const auto& sigma = std::get<Feasible>(out).sigma;
  for (VertexId v : path->vertices) {
    if (node.tree.vertex(v).action) {
      EXPECT_TRUE(sigma.count(v) && sigma.at(v).values) << v;
    }
  }
  EXPECT_GT(work.units(), 0);
}

TEST(Concretize, BlockedGraspReportsCollisionAtom) {
  auto p = fixture("blocked_table.json");
  auto prg = init_prg(p);
  auto& node = prg.node(0);
  ASSERT_EQ(root(node).action->to_string().rfind("pickup(c=target", 0), 0u);
  Rng rng(2);
  domains::Work work;
  auto path = get_unrefined_path(node, p);
  auto out = concretize_path(node, *path, p, rng, {}, 0.0, work);
  ASSERT_TRUE(std::holds_alternative<Failed>(out));
  const auto& f = std::get<Failed>(out).failure;
  EXPECT_EQ(f.vertex, node.tree.root());
  ASSERT_EQ(f.atoms.size(), 1u);
  EXPECT_EQ(f.atoms[0].relation, "Collision");
  EXPECT_EQ(f.atoms[0].args, (logic::Tuple{"blocker", "traj_pick_target"}));
  EXPECT_EQ(f.atoms[0].value, logic::Truth::True);
}

TEST(Concretize, NoExplorationWhenProbabilityZero) {
  auto p = fixture("domino_6_2.json");
  Rng rng(3);
  int explored = 0;
  for (int i = 0; i < 100; ++i) {
    auto prg = init_prg(p);
    domains::Work work;
    auto path = get_unrefined_path(prg.node(0), p);
    explored += std::holds_alternative<Explored>(concretize_path(prg.node(0), *path, p, rng, {}, 0.0, work));
  }
  EXPECT_EQ(explored, 0);
}

TEST(Concretize, ExplorationSwapsAnAction) {
  auto p = fixture("cluttered_table_3.json");
  Rng rng(4);
  int explored = 0;
  for (int i = 0; i < 20; ++i) {
    auto prg = init_prg(p);
    domains::Work work;
    auto path = get_unrefined_path(prg.node(0), p);
    auto out = concretize_path(prg.node(0), *path, p, rng, {}, 1.0, work);
    explored += std::holds_alternative<Explored>(out);
  }
  EXPECT_GT(explored, 0);
}

TEST(Concretize, FailureVertexIsEarliest) {
  int failures = 0;
  for (auto name : {"blocked_table.json", "aircraft_3.json", "cluttered_table_4.json"}) {
    auto p = fixture(name);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto prg = init_prg(p);
      auto& node = prg.node(0);
      Rng rng(seed);
      auto f = find_failure(node, p, rng);
      if (!f) continue;
      ++failures;
      // Every action above the failure vertex carries values that re-verify.
      std::set<VertexId> above;
      for (auto v = node.tree.vertex(f->vertex).parent; v; v = node.tree.vertex(*v).parent) above.insert(*v);
      for (VertexId v : above) {
        ASSERT_TRUE(f->sigma.count(v) && f->sigma.at(v).values) << name << " vertex " << v;
        const auto& vx = node.tree.vertex(v);
        auto state = p.engine->overlay(*vx.state, f->sigma.at(v).world, *vx.action, *f->sigma.at(v).values);
        EXPECT_TRUE(p.engine->verify(*vx.state, f->sigma.at(v).world, *vx.action, *f->sigma.at(v).values).empty());
        EXPECT_EQ(logic::evaluate(*vx.action->precondition, state), logic::Truth::True);
      }
      EXPECT_FALSE(f->sigma.count(f->vertex) && f->sigma.at(f->vertex).values);
    }
  }
  EXPECT_GE(failures, 5);
}

TEST(UpdateAbstraction, EmptyFailureIsRejected) {
  auto p = fixture("blocked_table.json");
  auto prg = init_prg(p);
  Rng rng(0);
  Failure f;
  f.vertex = prg.node(0).tree.root();
  EXPECT_THROW(update_abstraction(prg, 0, f, p, rng), RefineError);
}

TEST(UpdateAbstraction, CollisionForcesReplanAroundBlocker) {
  auto p = fixture("blocked_table.json");
  auto prg = init_prg(p);
  Rng rng(5);
  auto f = find_failure(prg.node(0), p, rng);
  ASSERT_TRUE(f);
  NodeId child = update_abstraction(prg, 0, *f, p, rng);
  ASSERT_EQ(prg.size(), 2u);
  const auto& n = prg.node(child);
  EXPECT_EQ(n.parent, NodeId{0});
  EXPECT_FALSE(n.dead);
  const auto& r = root(n);
  EXPECT_EQ(r.state->holds("Collision", {"blocker", "traj_pick_target"}), logic::Truth::True);
  ASSERT_TRUE(r.action);
  EXPECT_NE(r.action->to_string().rfind("pickup(c=target", 0), 0u);
  ASSERT_EQ(prg.edges().size(), 1u);
  EXPECT_EQ(prg.edges()[0].failed, f->atoms);
}

TEST(UpdateAbstraction, TwoFailuresMakeChainOfThree) {
  auto p = fixture("blocked_table.json");
  auto prg = init_prg(p);
  Rng rng(6);
  auto f = find_failure(prg.node(0), p, rng);
  ASSERT_TRUE(f);
  NodeId a = update_abstraction(prg, 0, *f, p, rng);
  Failure second;
  second.vertex = prg.node(a).tree.root();
  second.atoms = {{"Collision", {"target", "traj_pick_blocker"}, logic::Truth::True}};
  second.sigma[second.vertex].world = p.initial_world;
  NodeId b = update_abstraction(prg, a, second, p, rng);
  EXPECT_EQ(prg.size(), 3u);
  EXPECT_EQ(prg.node(b).parent, a);
  EXPECT_EQ(prg.node(a).parent, NodeId{0});
  EXPECT_EQ(prg.edges().size(), 2u);
}

TEST(Atm, ZeroDeadlineGivesNoSnapshots) {
  auto r = atm_mdp(fixture("cluttered_table_3.json"), deadline(0.0));
  EXPECT_TRUE(r.snapshots.empty());
  EXPECT_EQ(r.mass, 0.0);
  EXPECT_FALSE(r.complete);
}

TEST(Atm, DeterministicSinglePathGivesOneSnapshot) {
  auto r = atm_mdp(domains::make_cluttered_table(1, 1.0, 0.0, 0.0), virtual_options(0));
  ASSERT_EQ(r.snapshots.size(), 1u);
  EXPECT_NEAR(r.snapshots[0].mass, 1.0, 1e-12);
  EXPECT_TRUE(r.complete);
}

TEST(Atm, SnapshotsAreMonotoneAndSound) {
  for (auto name : {"cluttered_table_3.json", "domino_6_2.json", "blocked_table.json", "aircraft_3.json"}) {
    auto p = fixture(name);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      auto r = atm_mdp(p, virtual_options(seed));
      ASSERT_FALSE(r.snapshots.empty()) << name;
      EXPECT_TRUE(r.complete) << name << " seed " << seed;
      EXPECT_NEAR(r.snapshots.back().mass, 1.0, 1e-9);
      for (std::size_t i = 1; i < r.snapshots.size(); ++i) {
        EXPECT_GT(r.snapshots[i].elapsed_s, r.snapshots[i - 1].elapsed_s);
        EXPECT_GE(r.snapshots[i].mass, r.snapshots[i - 1].mass);
        EXPECT_GE(r.snapshots[i].work_units, r.snapshots[i - 1].work_units);
      }
      for (const auto& s : r.snapshots) {
        EXPECT_TRUE(audit(r.prg.node(s.node), s.refined, p).empty()) << name << " snapshot " << s.index;
        double mass = 0.0;
        for (VertexId leaf : s.refined) mass += r.prg.node(s.node).tree.path_probability(leaf);
        EXPECT_NEAR(std::min(mass, 1.0), s.mass, 1e-9);
      }
      EXPECT_EQ(r.curve.points().size(), r.snapshots.size());
    }
  }
}

TEST(Atm, PrgIsAcyclic) {
  auto p = fixture("blocked_table.json");
  auto r = atm_mdp(p, virtual_options(2));
  for (const auto& e : r.prg.edges()) EXPECT_LT(e.from, e.to);
  for (const auto& n : r.prg.nodes()) {
    std::set<NodeId> seen{n.id};
    for (auto q = n.parent; q; q = r.prg.node(*q).parent) EXPECT_TRUE(seen.insert(*q).second);
    EXPECT_TRUE(n.id == 0 || n.parent);
  }
  EXPECT_GT(r.prg.size(), 1u);
}

TEST(Atm, SameSeedSameRun) {
  auto p = fixture("domino_6_2.json");
  auto a = atm_mdp(p, virtual_options(9));
  auto b = atm_mdp(p, virtual_options(9));
  ASSERT_EQ(a.snapshots.size(), b.snapshots.size());
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
    EXPECT_EQ(a.snapshots[i].elapsed_s, b.snapshots[i].elapsed_s);
    EXPECT_EQ(a.snapshots[i].mass, b.snapshots[i].mass);
  }
}

TEST(Atm, WorkBudgetStopsEarly) {
  auto r = atm_mdp(fixture("domino_6_2.json"), budget(1));
  EXPECT_FALSE(r.complete);
  EXPECT_LT(r.mass, 1.0);
}

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stamp/common/rng.hpp"
#include "stamp/domains/builtin.hpp"
#include "stamp/domains/problem.hpp"
#include "stamp/domains/spec.hpp"
#include "stamp/ssp/policy_tree.hpp"
#include "stamp/ssp/value_iteration.hpp"

using namespace stamp;
using namespace stamp::domains;

namespace {

std::string fixture_path(const std::string& name) { return std::string(STAMP_DATA_DIR) + "/" + name; }

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const ssp::GroundedAction& find_action(const ssp::SspModel& m, const std::string& text) {
  for (const auto& a : m.actions()) {
    if (a.to_string() == text || a.schema == text) return a;
  }
  throw std::runtime_error("no action " + text);
}

int possible_outcomes(const ssp::GroundedAction& a) {
  int n = 0;
  for (const auto& o : a.outcomes) n += o.probability > 0.0;
  return n;
}

std::string with_edit(const std::string& fixture, const std::function<void(nlohmann::json&)>& edit) {
  auto j = nlohmann::json::parse(read_text(fixture_path(fixture)));
  edit(j);
  return j.dump();
}

const std::vector<std::pair<std::string, DomainSpec>>& fixtures() {
  static const std::vector<std::pair<std::string, DomainSpec>> all{
      {"cluttered_table_3.json", builtin_spec("cluttered_table", {{"n", "3"}, {"crush", "0.5"}})},
      {"cluttered_table_4.json", builtin_spec("cluttered_table", {{"n", "4"}, {"crush", "0.5"}})},
      {"blocked_table.json", builtin_spec("blocked_table", {})},
      {"domino_6_2.json", builtin_spec("domino", {{"n", "6"}, {"k", "2"}})},
      {"aircraft_3.json", builtin_spec("aircraft", {{"sites", "3"}, {"fail", "0.1"}})},
      {"place.json", builtin_spec("place", {})},
  };
  return all;
}

} // namespace

TEST(Fixtures, LoadSerializeIsIdentity) {
  for (const auto& [name, spec] : fixtures()) {
    const auto text = read_text(fixture_path(name));
    const auto parsed = parse_domain(text);
    EXPECT_EQ(serialize_domain(parsed), text) << name;
    EXPECT_EQ(parse_domain(serialize_domain(parsed)), parsed) << name;
  }
}

TEST(Fixtures, MatchGenerators) {
  for (const auto& [name, spec] : fixtures()) EXPECT_EQ(load_domain_file(fixture_path(name)), spec) << name;
}

TEST(Fixtures, ClutteredTableHasThreeCans) {
  auto p = load_problem_file(fixture_path("cluttered_table_3.json"));
  int cans = 0;
  for (const auto& e : p.spec.entities) cans += e.sort == "can";
  EXPECT_EQ(cans, 3);
  EXPECT_EQ(p.initial_world.poses.count("c1"), 1u);
}

TEST(Load, ProbabilitySumMustBeOne) {
  auto text = with_edit("place.json", [](nlohmann::json& j) {
    j["actions"][1]["outcomes"][0]["p"] = 0.8;
    j["actions"][1]["outcomes"][1]["p"] = 0.3;
  });
  EXPECT_THROW(load_problem_text(text), DomainError);
}

TEST(Load, SyntaxErrorNamesLine) {
  try {
    parse_domain("{\n  \"name\": \"x\",\n  oops\n}");
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Load, UnknownSymbolInFormulaFails) {
  auto text = with_edit("place.json", [](nlohmann::json& j) { j["goal"] = "levitating(cup)"; });
  EXPECT_THROW(load_problem_text(text), DomainError);
}

TEST(Load, UnknownSortFails) {
  auto text = with_edit("place.json", [](nlohmann::json& j) { j["entities"][0]["sort"] = "mug"; });
  EXPECT_THROW(load_problem_text(text), DomainError);
}

TEST(Load, MissingFieldNamesPath) {
  auto text = with_edit("place.json", [](nlohmann::json& j) { j["actions"][1].erase("outcomes"); });
  try {
    load_problem_text(text);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("outcomes"), std::string::npos) << e.what();
  }
}

TEST(Load, EmptyUniverseWithTrueGoalIsSolved) {
  DomainSpec spec;
  spec.name = "empty";
  spec.goal = "true";
  auto p = build_problem(spec);
  EXPECT_TRUE(p.abstract_model.is_goal(p.abstract_model.initial()));
}

TEST(Generators, ClutteredDeterministicWhenNoCrush) {
  auto p = make_cluttered_table(1, 1.0, 0.0, 0.0);
  const auto& pick = find_action(p.abstract_model, "pickup");
  EXPECT_EQ(possible_outcomes(pick), 1);
  auto tree = ssp::unroll(ssp::value_iteration(p.abstract_model), p.abstract_model);
  EXPECT_EQ(tree.leaves().size(), 1u);
}

TEST(Generators, ClutteredDelicateTargetBranchesEvenly) {
  auto p = make_cluttered_table(3, 0.34, 0.5);
  const auto& s0 = p.abstract_model.initial();
  for (const auto& a : p.abstract_model.actions()) {
    if (a.schema != "pickup" || a.binding("c") != "c1") continue;
    auto succ = p.abstract_model.transition(s0, a);
    ASSERT_EQ(succ.size(), 2u);
    EXPECT_DOUBLE_EQ(succ[0].second, 0.5);
    EXPECT_DOUBLE_EQ(succ[1].second, 0.5);
    return;
  }
  FAIL() << "no pickup(c1)";
}

TEST(Generators, ClutteredLargeSizesBuild) {
  for (int n : {15, 20, 25}) EXPECT_NO_THROW(make_cluttered_table(n, 0.34, 0.5, 0.05, 1)) << n;
}

TEST(Generators, DominoContingencies) {
  auto p0 = make_domino(3, 0);
  EXPECT_EQ(p0.abstract_model.transition(p0.abstract_model.initial(), find_action(p0.abstract_model, "pickup_d1")).size(),
            1u);
  auto p1 = make_domino(3, 1);
  EXPECT_EQ(p1.abstract_model.transition(p1.abstract_model.initial(), find_action(p1.abstract_model, "pickup_d1")).size(),
            4u);
  auto p2 = make_domino(6, 2);
  auto succ = p2.abstract_model.transition(p2.abstract_model.initial(), find_action(p2.abstract_model, "pickup_d3"));
  ASSERT_EQ(succ.size(), 16u);
  double total = 0.0;
  for (const auto& [s, pr] : succ) total += pr;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(succ.front().second, 0.9 * 0.9 * 0.9 * 0.9, 1e-12);
}

TEST(Generators, DominoPreconditions) {
  EXPECT_THROW(make_domino(4, 2), DomainError);
  EXPECT_THROW(make_domino(0, 0), DomainError);
  EXPECT_NO_THROW(make_domino(10, 3));
}

TEST(Generators, AircraftInspectDeterministicWithoutFailures) {
  auto p = make_aircraft_inspection(2, 0.0, 1.0);
  for (const auto& a : p.abstract_model.actions()) {
    if (a.schema == "inspect") {
      EXPECT_EQ(possible_outcomes(a), 1) << a.to_string();
    }
  }
}

TEST(Generators, AircraftTwoInspectionsDetect99Percent) {
  auto p = make_aircraft_inspection(1, 0.1, 1.0);
  double missed = 1.0;
  for (const auto& a : p.abstract_model.actions()) {
    if (a.schema != "inspect") continue;
    for (const auto& o : a.outcomes) {
      if (o.label == "missed") missed = o.probability;
    }
  }
  EXPECT_NEAR(1.0 - missed * missed, 0.99, 1e-12);
}

TEST(Generators, PlaceSplitsEightyTwenty) {
  auto p = build_problem(place_spec());
  const auto& m = p.abstract_model;
  auto after_pick = m.transition(m.initial(), find_action(m, "pickup"));
  ASSERT_EQ(after_pick.size(), 1u);
  auto succ = m.transition(after_pick[0].first, find_action(m, "place"));
  ASSERT_EQ(succ.size(), 2u);
  EXPECT_DOUBLE_EQ(succ[0].second, 0.8);
  EXPECT_DOUBLE_EQ(succ[1].second, 0.2);
}

TEST(Generators, PlaceOutcomeFrequency) {
  auto p = build_problem(place_spec());
  const auto& place = find_action(p.abstract_model, "place");
  Rng rng(99);
  int success = 0;
  for (int i = 0; i < 10000; ++i) {
    double u = rng.uniform(), acc = 0.0;
    std::size_t k = 0;
    for (; k + 1 < place.outcomes.size(); ++k) {
      acc += place.outcomes[k].probability;
      if (u < acc) break;
    }
    success += place.outcomes[k].label == "success";
  }
  EXPECT_NEAR(success / 10000.0, 0.8, 0.012);
}

TEST(Generators, AbstractionOfInitialWorldIsModelInitial) {
  for (const auto& [name, spec] : fixtures()) {
    auto p = build_problem(spec);
    auto a0 = abstract_state(p, p.initial_world, p.abstract_model.initial());
    EXPECT_TRUE(logic::compatible(a0, p.abstract_model.initial())) << name;
  }
}

// Random concrete rollouts: the abstraction of every concrete successor agrees
// with some abstract outcome of the same action on every atom known in both.
TEST(Generators, AbstractModelIsSoundForSampledTransitions) {
  for (const auto& [name, spec] : fixtures()) {
    auto p = build_problem(spec);
    const auto& m = p.abstract_model;
    Rng rng(7);
    int checked = 0;
    for (int episode = 0; episode < 200 && checked < 100; ++episode) {
      auto s = m.initial();
      auto w = p.initial_world;
      for (int t = 0; t < m.horizon() && checked < 100 && !m.is_goal(s); ++t) {
        std::vector<const ssp::GroundedAction*> candidates;
        for (const auto& a : m.actions()) {
          if (ssp::applicable(a, s)) candidates.push_back(&a);
        }
        if (candidates.empty()) break;
        const auto& a = *candidates[rng.index(candidates.size())];
        auto r = p.engine->attempt(s, w, a, rng);
        if (!r.feasible) break;
        const auto o = rng.index(a.outcomes.size());
        auto w_next = p.engine->apply(w, a, r.values, o, rng);
        auto s_next = ssp::apply_outcome(p.engine->overlay(s, w, a, r.values), a.outcomes[o]);
        auto observed = abstract_state(p, w_next, s_next);
        bool matched = false;
        for (const auto& [succ, pr] : m.transition(s, a)) matched = matched || logic::compatible(observed, succ);
        EXPECT_TRUE(matched) << name << ": " << a.to_string() << " outcome " << a.outcomes[o].label;
        ++checked;
        s = s_next;
        w = w_next;
      }
    }
    EXPECT_GE(checked, 20) << name;
  }
}

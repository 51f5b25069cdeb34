#include <gtest/gtest.h>

#include <set>

#include "stamp/common/rng.hpp"
#include "stamp/logic/abstraction.hpp"
#include "stamp/logic/concretization.hpp"
#include "stamp/logic/formula.hpp"
#include "stamp/logic/structure.hpp"

using namespace stamp;
using namespace stamp::logic;

namespace {

VocabularyPtr at_vocabulary(Truth default_value = Truth::False) {
  auto v = std::make_shared<Vocabulary>();
  v->add_relation(RelationSymbol{"at", 2, {"obj", "loc"}, default_value, false});
  v->add_relation(RelationSymbol{"Collision", 2, {"obj", "traj"}, Truth::Unknown, true});
  v->add_relation("g", 1);
  return v;
}

// 2 objects, 4 location points, 1 trajectory: at most 7 entities.
LogicalStructure random_world(const VocabularyPtr& v, Rng& rng) {
  LogicalStructure s(v);
  s.add_entity("o1", "obj");
  s.add_entity("o2", "obj");
  for (int i = 0; i < 4; ++i) s.add_entity("p" + std::to_string(i), "loc", {rng.uniform(), rng.uniform()});
  for (const auto& o : {"o1", "o2"}) {
    for (int i = 0; i < 4; ++i) {
      const double u = rng.uniform();
      s.set("at", {o, "p" + std::to_string(i)}, u < 0.4 ? Truth::True : u < 0.7 ? Truth::Unknown : Truth::False);
    }
  }
  return s;
}

RepresentationFunction rooms() {
  RepresentationFunction rho;
  rho.set("O1", ExtensionalRegion{{"o1"}}, "obj");
  rho.set("O2", ExtensionalRegion{{"o2"}}, "obj");
  rho.set("Kitchen", BoxRegion{{0.0, 0.0}, {0.5, 1.0}}, "loc");
  rho.set("Hall", BoxRegion{{0.5, 0.0}, {1.0, 1.0}}, "loc");
  return rho;
}

AbstractionQuery entity_alpha(const VocabularyPtr& v) {
  auto target = std::make_shared<Vocabulary>(v->restricted_to({"at"}));
  AbstractionQuery a;
  a.source = v;
  a.target = target;
  a.kind = AbstractionKind::Entity;
  a.defining["at"] = {{"x", "y"}, parse_formula("at(x, y)")};
  return a;
}

} // namespace

TEST(Truth, KleeneTables) {
  const Truth all[] = {Truth::False, Truth::Unknown, Truth::True};
  for (Truth a : all) {
    EXPECT_EQ(!!a, a);
    for (Truth b : all) {
      EXPECT_EQ(a && b, std::min(a, b));
      EXPECT_EQ(a || b, std::max(a, b));
      EXPECT_EQ(!(a && b), (!a) || (!b));
    }
  }
  EXPECT_EQ(Truth::Unknown && Truth::False, Truth::False);
  EXPECT_EQ(Truth::Unknown || Truth::True, Truth::True);
}

TEST(Evaluate, IdentityIsTrue) {
  auto v = at_vocabulary();
  LogicalStructure s(v);
  s.add_entity("e1");
  EXPECT_EQ(evaluate(*parse_formula("x = x"), s, {{"x", "e1"}}), Truth::True);
}

TEST(Evaluate, UnknownCollisionPropagates) {
  auto v = at_vocabulary();
  LogicalStructure s(v);
  s.add_entity("obj1", "obj");
  s.add_entity("t1", "traj");
  s.add_entity("t2", "traj");
  EXPECT_EQ(evaluate(*parse_formula("exists t:traj. Collision(obj1, t)"), s), Truth::Unknown);
  EXPECT_EQ(evaluate(*parse_formula("forall t:traj. !Collision(obj1, t)"), s), Truth::Unknown);
  s.set("Collision", {"obj1", "t2"}, Truth::True);
  EXPECT_EQ(evaluate(*parse_formula("exists t:traj. Collision(obj1, t)"), s), Truth::True);
  EXPECT_EQ(evaluate(*parse_formula("forall t:traj. !Collision(obj1, t)"), s), Truth::False);
}

TEST(Evaluate, HalfPlaneRegionMembership) {
  // Unit-square kitchen: -x < 0, x - 1 < 0, -y < 0, y - 1 < 0.
  auto v = std::make_shared<Vocabulary>();
  LogicalStructure s(v);
  s.add_entity("loc", "pt", {0.5, 0.5});
  const std::vector<std::vector<double>> planes{{-1, 0, 0}, {1, 0, -1}, {0, -1, 0}, {0, 1, -1}};
  std::string text;
  for (std::size_t i = 0; i < planes.size(); ++i) {
    s.add_entity("b" + std::to_string(i), "bv", planes[i]);
    text += (i ? " & " : "") + std::string("halfplane(loc, b") + std::to_string(i) + ")";
  }
  EXPECT_EQ(evaluate(*parse_formula(text), s), Truth::True);
  s.add_entity("out", "pt", {1.5, 0.5});
  std::string outside = text;
  for (std::size_t p = 0; (p = outside.find("loc", p)) != std::string::npos;) outside.replace(p, 3, "out");
  EXPECT_EQ(evaluate(*parse_formula(outside), s), Truth::False);
}

TEST(Evaluate, UnknownSymbolIsMalformed) {
  auto v = at_vocabulary();
  LogicalStructure s(v);
  s.add_entity("a");
  EXPECT_THROW(evaluate(*parse_formula("nosuch(a)"), s), MalformedFormula);
  EXPECT_THROW(evaluate(*parse_formula("g(zz)"), s), MalformedFormula);
  EXPECT_THROW(parse_formula("g(a) &"), MalformedFormula);
}

TEST(Evaluate, ReducesToTwoValuedWithoutUnknowns) {
  Rng rng(3);
  auto v = at_vocabulary();
  const char* formulas[] = {"exists l:loc. at(o1, l) & !at(o2, l)", "forall l:loc. (at(o1, l) -> at(o2, l))",
                            "at(o1, p0) | !at(o2, p1)"};
  for (int trial = 0; trial < 50; ++trial) {
    auto s = random_world(v, rng);
    for (const auto& o : {"o1", "o2"}) {
      for (int i = 0; i < 4; ++i) {
        Tuple t{o, "p" + std::to_string(i)};
        if (s.holds("at", t) == Truth::Unknown) s.set("at", t, from_bool(rng.bernoulli(0.5)));
      }
    }
    for (const char* f : formulas) EXPECT_NE(evaluate(*parse_formula(f), s), Truth::Unknown) << f;
  }
}

TEST(Formula, RoundTripsThroughText) {
  for (const char* text : {"holding(c1) & !crushed(c1)", "forall o:can. (o = c | !Collision(o, t))",
                           "at(a) & a != b", "exists x. (p(x) -> q(x, y))"}) {
    auto f = parse_formula(text);
    EXPECT_EQ(parse_formula(f->to_string())->to_string(), f->to_string());
  }
}

TEST(Formula, SubstituteLeavesBoundVariables) {
  auto f = substitute(parse_formula("p(x) & exists x. q(x, y)"), {{"x", "a"}, {"y", "b"}});
  EXPECT_EQ(f->to_string(), parse_formula("p(a) & exists x. q(x, b)")->to_string());
}

TEST(Abstraction, PredicateAbstractionCopiesRetainedSymbols) {
  Rng rng(5);
  auto v = at_vocabulary();
  auto alpha = AbstractionQuery::predicate_abstraction(v, {"at"});
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_world(v, rng);
    s.set("g", {"o1"}, Truth::True);
    auto h = apply_abstraction(alpha, {}, s);
    EXPECT_FALSE(h.vocabulary().contains("g"));
    for (const auto& [id, e] : s.universe()) EXPECT_TRUE(h.has_entity(id));
    for (const auto& o : {"o1", "o2"}) {
      for (int i = 0; i < 4; ++i) {
        Tuple t{o, "p" + std::to_string(i)};
        EXPECT_EQ(h.holds("at", t), s.holds("at", t));
      }
    }
  }
}

TEST(Abstraction, PointInRegionLiftsToRoom) {
  auto v = at_vocabulary();
  LogicalStructure s(v);
  s.add_entity("o1", "obj");
  s.add_entity("o2", "obj");
  s.add_entity("p0", "loc", {0.2, 0.3});
  s.add_entity("p1", "loc", {0.8, 0.3});
  s.set("at", {"o1", "p0"}, Truth::True);
  auto h = apply_abstraction(entity_alpha(v), rooms(), s);
  EXPECT_EQ(h.holds("at", {"O1", "Kitchen"}), Truth::True);
  EXPECT_EQ(h.holds("at", {"O1", "Hall"}), Truth::False);
  EXPECT_EQ(h.holds("at", {"O2", "Kitchen"}), Truth::False);
  EXPECT_LE(h.universe().size(), s.universe().size());
}

TEST(Abstraction, EmptyRelationStaysEmpty) {
  auto v = at_vocabulary();
  LogicalStructure s(v);
  s.add_entity("o1", "obj");
  s.add_entity("o2", "obj");
  s.add_entity("p0", "loc", {0.7, 0.3});
  auto h = apply_abstraction(entity_alpha(v), rooms(), s);
  for (const auto& [t, value] : h.entries("at")) EXPECT_NE(value, Truth::True);
}

TEST(Abstraction, UnknownRegionMemberIsRejected) {
  auto v = at_vocabulary();
  LogicalStructure s(v);
  s.add_entity("o1", "obj");
  auto rho = rooms();
  EXPECT_THROW(apply_abstraction(entity_alpha(v), rho, s), AbstractionError);
}

// Exhaustive witness search, written against the definition rather than the
// implementation's enumeration order.
TEST(Abstraction, EntityAbstractionIsSoundAndComplete) {
  Rng rng(11);
  auto v = at_vocabulary();
  auto alpha = entity_alpha(v);
  auto rho = rooms();
  for (int trial = 0; trial < 200; ++trial) {
    auto s = random_world(v, rng);
    auto h = apply_abstraction(alpha, rho, s);
    for (const auto& ao : {"O1", "O2"}) {
      for (const auto& al : {"Kitchen", "Hall"}) {
        bool any_true = false, any_unknown = false;
        for (const auto& [oid, oe] : s.universe()) {
          if (!contains(rho.region(ao), oid, oe)) continue;
          for (const auto& [lid, le] : s.universe()) {
            if (le.sort != "loc" || !contains(rho.region(al), lid, le)) continue;
            const Truth t = s.holds("at", {oid, lid});
            any_true = any_true || t == Truth::True;
            any_unknown = any_unknown || t == Truth::Unknown;
          }
        }
        const Truth expected = any_true ? Truth::True : any_unknown ? Truth::Unknown : Truth::False;
        EXPECT_EQ(h.holds("at", {ao, al}), expected) << ao << " " << al;
      }
    }
    // Deterministic.
    EXPECT_EQ(apply_abstraction(alpha, rho, s), h);
  }
}

TEST(Abstraction, ImageDeduplicatesEqualAbstractions) {
  auto v = at_vocabulary();
  auto alpha = entity_alpha(v);
  auto rho = rooms();
  auto make = [&](double x) {
    LogicalStructure s(v);
    s.add_entity("o1", "obj");
    s.add_entity("o2", "obj");
    s.add_entity("p0", "loc", {x, 0.5});
    s.set("at", {"o1", "p0"}, Truth::True);
    return s;
  };
  auto image = [&](std::vector<double> xs) {
    std::size_t i = 0;
    return abstract_image(
        [&]() -> std::optional<LogicalStructure> {
          if (i >= xs.size()) return std::nullopt;
          return make(xs[i++]);
        },
        alpha, rho);
  };
  EXPECT_EQ(image({0.1}).size(), 1u);
  EXPECT_EQ(image({0.1, 0.3}).size(), 1u);
  auto two = image({0.1, 0.9});
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0], apply_abstraction(alpha, rho, make(0.1)));
  EXPECT_EQ(two[1], apply_abstraction(alpha, rho, make(0.9)));
}

TEST(Concretization, ExtensionalRegionIsEnumeratedExactly) {
  ConcretizationGenerator gen(ExtensionalRegion{{"a", "b", "c"}}, Rng(1));
  std::set<EntityId> seen;
  while (auto v = gen.next()) seen.insert(std::get<EntityId>(*v));
  EXPECT_EQ(seen, (std::set<EntityId>{"a", "b", "c"}));
  gen.restart();
  EXPECT_TRUE(gen.next().has_value());
}

TEST(Concretization, SingletonYieldsItsMemberFirst) {
  ConcretizationGenerator gen(ExtensionalRegion{{"p0"}}, Rng(9));
  EXPECT_EQ(std::get<EntityId>(*gen.next()), "p0");
}

TEST(Concretization, BoxSamplesStayInside) {
  const Region box = BoxRegion{{0.0, 0.0}, {1.0, 1.0}};
  ConcretizationGenerator gen(box, Rng(2));
  for (int i = 0; i < 1000; ++i) {
    auto v = gen.next();
    ASSERT_TRUE(v);
    EXPECT_TRUE(satisfies_region(box, *v));
  }
}

TEST(Concretization, PolygonSamplesStayInside) {
  const Region tri = PolygonRegion{{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}};
  ConcretizationGenerator gen(tri, Rng(4));
  for (int i = 0; i < 500; ++i) {
    const auto p = std::get<Payload>(*gen.next());
    EXPECT_LT(p[0] + p[1], 1.0);
  }
}

TEST(Concretization, EmptyRegionThrows) {
  ConcretizationGenerator gen(ExtensionalRegion{}, Rng(0));
  EXPECT_THROW(gen.next(), NoSampleError);
}

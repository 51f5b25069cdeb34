#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stamp/common/error.hpp"
#include "stamp/motion/geometry.hpp"

namespace stamp::domains {

class DomainError : public Error {
public:
  using Error::Error;
};

inline constexpr int kSchemaVersion = 1;

struct ShapeSpec {
  /// "disc" or "polygon" (vertices relative to the owner's pose, CCW).
  std::string kind = "disc";
  double radius = 0.0;
  std::vector<motion::Vec2> vertices;
  friend bool operator==(const ShapeSpec&, const ShapeSpec&) = default;
};

struct RegionSpec {
  /// "box", "polygon" or "set".
  std::string kind = "box";
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<motion::Vec2> vertices;
  std::vector<std::string> members;
  friend bool operator==(const RegionSpec&, const RegionSpec&) = default;
};

struct PredicateSpec {
  std::string name;
  /// Parameter sorts.
  std::vector<std::string> params;
  /// "" for ordinary fluents. Derived predicates default to unknown and are
  /// computed during concretization: "swept_collision", "insufficient_charge".
  std::string derived;
  friend bool operator==(const PredicateSpec&, const PredicateSpec&) = default;
};

struct EntitySpec {
  std::string id;
  std::string sort;
  std::map<std::string, double> attrs;
  std::optional<ShapeSpec> shape;
  std::optional<std::vector<double>> pose;
  std::optional<RegionSpec> region;
  friend bool operator==(const EntitySpec&, const EntitySpec&) = default;
};

/// Where a motion symbol ends.
struct TargetSpec {
  /// "grasp" (object), "placement" (object at pose symbol), "entity" (pose of
  /// the entity bound to a parameter), "home".
  std::string kind = "home";
  std::string object;
  std::string pose;
  std::string entity;
  friend bool operator==(const TargetSpec&, const TargetSpec&) = default;
};

/// A symbolic action argument bound to a per-grounding entity.
struct SymbolSpec {
  std::string param;
  std::string sort;
  /// Entity id template, e.g. "traj_pick_{c}".
  std::string entity;
  /// "motion" or "placement".
  std::string generator;
  TargetSpec to;
  /// Parameters whose objects the motion may overlap.
  std::vector<std::string> ignore;
  /// Placement region: id of an entity carrying a region.
  std::string region;
  /// Object being placed.
  std::string object;
  /// Atom template for infeasible motions; '#' is replaced by each blocking object.
  std::string blocked;
  friend bool operator==(const SymbolSpec&, const SymbolSpec&) = default;
};

/// A number, or the attribute `attr` of the entity bound to `param`, or one minus it.
struct ProbabilitySpec {
  double value = 1.0;
  std::string attr;
  std::string param;
  bool complement = false;
  friend bool operator==(const ProbabilitySpec&, const ProbabilitySpec&) = default;
};

struct ConcreteEffectSpec {
  /// robot_to, attach, detach, restock, robot_home, robot_to_entity, consume, recharge
  std::string kind;
  std::string symbol;
  std::string object;
  std::string entity;
  /// Perturbation radius as a fraction of the workspace diagonal.
  double noise = 0.0;
  friend bool operator==(const ConcreteEffectSpec&, const ConcreteEffectSpec&) = default;
};

struct OutcomeSpec {
  ProbabilitySpec p;
  std::string label;
  /// "holding(c)", "!ontable(c)", "?Collision(c, *traj)"
  std::vector<std::string> effects;
  std::vector<ConcreteEffectSpec> concrete;
  friend bool operator==(const OutcomeSpec&, const OutcomeSpec&) = default;
};

/// An effect group that fires independently with probability p on top of
/// every outcome. m groups multiply the outcome count by 2^m.
struct IndependentSpec {
  double p = 0.0;
  std::string label;
  std::vector<std::string> effects;
  friend bool operator==(const IndependentSpec&, const IndependentSpec&) = default;
};

struct ActionSpec {
  std::string name;
  /// (name, sort) pairs; grounded over the entities of each sort.
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<SymbolSpec> symbols;
  std::string precondition = "true";
  double cost = 1.0;
  std::vector<OutcomeSpec> outcomes;
  std::vector<IndependentSpec> independent;
  friend bool operator==(const ActionSpec&, const ActionSpec&) = default;
};

struct ObstacleSpec {
  std::string tag;
  ShapeSpec shape;
  std::vector<double> pose;
  friend bool operator==(const ObstacleSpec&, const ObstacleSpec&) = default;
};

struct SceneSpec {
  std::vector<double> lo{0.0, 0.0};
  std::vector<double> hi{1.0, 1.0};
  ShapeSpec robot{"disc", 0.025, {}};
  std::vector<double> home{0.5, 0.05};
  std::vector<ObstacleSpec> obstacles;
  std::vector<double> grasp_offset{0.0, 0.0};
  friend bool operator==(const SceneSpec&, const SceneSpec&) = default;
};

struct BatterySpec {
  double capacity = 0.0;
  /// Charge used per unit trajectory length.
  double rate = 1.0;
  friend bool operator==(const BatterySpec&, const BatterySpec&) = default;
};

struct PlannerSpec {
  int iteration_budget = 2000;
  friend bool operator==(const PlannerSpec&, const PlannerSpec&) = default;
};

struct DomainSpec {
  int schema_version = kSchemaVersion;
  std::string name;
  std::vector<std::string> sorts;
  std::vector<PredicateSpec> predicates;
  std::vector<EntitySpec> entities;
  std::vector<ActionSpec> actions;
  /// Ground atoms true initially; every other ordinary fluent is false.
  std::vector<std::string> initial;
  std::string goal = "true";
  int horizon = 1;
  SceneSpec scene;
  std::optional<BatterySpec> battery;
  PlannerSpec planner;

  const EntitySpec* entity(const std::string& id) const;
  const PredicateSpec* predicate(const std::string& name) const;
  const ActionSpec* action(const std::string& name) const;

  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

/// Parses a JSON document. Errors name the offending field path, and the line
/// for syntax errors.
DomainSpec parse_domain(const std::string& text);
DomainSpec load_domain_file(const std::string& path);
/// Canonical JSON text; parse_domain(serialize_domain(d)) == d.
std::string serialize_domain(const DomainSpec& spec);


} // namespace stamp::domains

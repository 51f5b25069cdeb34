#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stamp/common/rng.hpp"
#include "stamp/domains/spec.hpp"
#include "stamp/logic/concretization.hpp"
#include "stamp/logic/structure.hpp"
#include "stamp/motion/planner.hpp"
#include "stamp/ssp/model.hpp"

namespace stamp::domains {

/// Continuous part of a concrete state. The discrete part lives in the
/// policy-tree vertex the world state is attached to.
struct WorldState {
  /// Poses of objects resting in the scene (held objects have none).
  std::map<std::string, motion::Config> poses;
  motion::Config robot;
  std::optional<std::string> held;
  double battery = 0.0;

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

/// Values for the symbolic parameters of one grounded action.
using Assignment = std::map<std::string, logic::ConcreteValue>;

struct GroundAtom {
  std::string relation;
  logic::Tuple args;
  logic::Truth value = logic::Truth::True;

  std::string to_string() const;
  friend bool operator==(const GroundAtom&, const GroundAtom&) = default;
  friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
};

struct Work {
  long long samples = 0;
  long long planner_iterations = 0;
  int planner_calls = 0;

  long long units() const { return samples + planner_iterations; }
  Work& operator+=(const Work& o) {
    samples += o.samples;
    planner_iterations += o.planner_iterations;
    planner_calls += o.planner_calls;
    return *this;
  }
};

struct AttemptResult {
  bool feasible = false;
  Assignment values;
  /// Derived atoms whose concrete value blocks the action (empty if unknown cause).
  std::vector<GroundAtom> atoms;
  std::string reason;
  Work work;
};

/// Concrete semantics of a domain: samples symbolic arguments, evaluates
/// derived predicates, and applies concrete outcome effects.
class Engine {
public:
  Engine(DomainSpec spec, logic::VocabularyPtr vocabulary);

  const DomainSpec& spec() const { return spec_; }
  const logic::VocabularyPtr& vocabulary() const { return vocabulary_; }

  WorldState initial_world() const;
  /// Static obstacles plus every resting object, tagged by entity id.
  motion::ConfigSpace scene(const WorldState& world) const;
  const motion::ConfigSpace& base_scene() const { return base_; }

  /// One sampling pass over the action's symbols at a vertex.
  AttemptResult attempt(const logic::LogicalStructure& state, const WorldState& world,
                        const ssp::GroundedAction& action, Rng& rng) const;

  /// Concrete successor for outcome `outcome` of `action`.
  WorldState apply(const WorldState& world, const ssp::GroundedAction& action, const Assignment& values,
                   std::size_t outcome, Rng& rng) const;

  /// `state` with the action's derived atoms set from the concrete values.
  logic::LogicalStructure overlay(const logic::LogicalStructure& state, const WorldState& world,
                                  const ssp::GroundedAction& action, const Assignment& values) const;

  /// Independent re-check of a stored concretization. Returns violations.
  std::vector<std::string> verify(const logic::LogicalStructure& state, const WorldState& world,
                                  const ssp::GroundedAction& action, const Assignment& values) const;

  /// Symbol entities of a grounded action (the arguments that need sampling).
  std::vector<std::string> symbolic_arguments(const ssp::GroundedAction& action) const;

  /// Maps a grounded outcome index to (declared outcome, independent-group mask).
  std::pair<std::size_t, std::uint32_t> decode_outcome(const ActionSpec& spec, std::size_t outcome) const;

private:
  const ActionSpec& schema(const ssp::GroundedAction& action) const;
  std::set<std::string> ignored(const ssp::GroundedAction& action, const SymbolSpec& symbol,
                                const WorldState& world) const;
  std::optional<motion::Config> motion_target(const ssp::GroundedAction& action, const SymbolSpec& symbol,
                                              const WorldState& world, const motion::ConfigSpace& scene,
                                              const Assignment& values) const;
  bool placement_clear(const WorldState& world, const std::string& object, const motion::Config& pose) const;
  motion::Shape object_shape(const std::string& object, const motion::Config& pose) const;

  DomainSpec spec_;
  logic::VocabularyPtr vocabulary_;
  motion::ConfigSpace base_;
  std::map<std::string, logic::Region> regions_;
};

motion::Shape to_shape(const ShapeSpec& spec);
logic::Region to_region(const RegionSpec& spec);

} // namespace stamp::domains

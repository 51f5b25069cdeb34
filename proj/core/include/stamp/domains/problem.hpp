#pragma once

#include <memory>
#include <string>

#include "stamp/domains/engine.hpp"
#include "stamp/domains/spec.hpp"
#include "stamp/logic/abstraction.hpp"
#include "stamp/logic/region.hpp"
#include "stamp/ssp/model.hpp"

namespace stamp::domains {

/// <M, c0, alpha, [M]>: the concrete semantics (engine + initial world), the
/// abstraction, and the abstract SSP.
struct StamppProblem {
  DomainSpec spec;
  logic::VocabularyPtr vocabulary;
  std::shared_ptr<const Engine> engine;
  WorldState initial_world;
  logic::AbstractionQuery alpha;
  logic::RepresentationFunction rho;
  ssp::SspModel abstract_model;
  /// Area of the workspace, used to normalize continuous region measures.
  double workspace_measure = 1.0;
};

/// Validates the spec and grounds it. Throws DomainError.
StamppProblem build_problem(const DomainSpec& spec);
StamppProblem load_problem_text(const std::string& json);
StamppProblem load_problem_file(const std::string& path);

/// Concrete structure for a world state: entities carry their poses; ordinary
/// fluents come from `discrete`.
logic::LogicalStructure concrete_structure(const StamppProblem& problem, const WorldState& world,
                                           const logic::LogicalStructure& discrete);

/// alpha applied to concrete_structure(world, discrete).
logic::LogicalStructure abstract_state(const StamppProblem& problem, const WorldState& world,
                                       const logic::LogicalStructure& discrete);

/// Parses "!holding(c)" / "?Collision(c, *traj)" after replacing parameter names.
ssp::Effect parse_effect(const std::string& text, const std::map<std::string, std::string>& bindings);

/// Replaces "{param}" occurrences.
std::string instantiate(const std::string& pattern, const std::map<std::string, std::string>& bindings);

} // namespace stamp::domains

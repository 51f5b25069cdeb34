#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stamp/common/error.hpp"
#include "stamp/logic/truth.hpp"
#include "stamp/logic/vocabulary.hpp"

namespace stamp::logic {

using EntityId = std::string;
using Payload = std::vector<double>;
using Tuple = std::vector<EntityId>;

struct Entity {
  std::string sort;
  /// Continuous data carried by the entity (pose, configuration). May be empty.
  Payload payload;
};

using Universe = std::map<EntityId, Entity>;

class StructureError : public Error {
public:
  using Error::Error;
};

/// Absolute tolerance used when comparing payloads.
inline constexpr double kPayloadTolerance = 1e-9;

/// A first-order model: a finite universe plus interpretations.
///
/// Relations store only entries that differ from the symbol's default value,
/// so equal interpretations always have identical storage. Functions may map a
/// tuple to an unknown value (`std::nullopt`). The universe is shared between
/// copies until one of them adds an entity.
class LogicalStructure {
public:
  explicit LogicalStructure(VocabularyPtr vocabulary);

  const Vocabulary& vocabulary() const { return *vocabulary_; }
  const VocabularyPtr& vocabulary_ptr() const { return vocabulary_; }

  void add_entity(const EntityId& id, std::string sort = {}, Payload payload = {});
  bool has_entity(const EntityId& id) const { return universe_->count(id) > 0; }
  const Entity& entity(const EntityId& id) const;
  const Universe& universe() const { return *universe_; }
  std::vector<EntityId> entities_of_sort(const std::string& sort) const;

  Truth holds(const std::string& relation, const Tuple& args) const;
  void set(const std::string& relation, const Tuple& args, Truth value);
  /// Explicit (non-default) entries of a relation.
  const std::map<Tuple, Truth>& entries(const std::string& relation) const;

  /// Function value; `std::nullopt` when marked unknown. Throws when undefined.
  std::optional<EntityId> apply(const std::string& function, const Tuple& args) const;
  bool defines(const std::string& function, const Tuple& args) const;
  const std::map<Tuple, std::optional<EntityId>>& function_entries(const std::string& function) const;
  void set_function(const std::string& function, const Tuple& args, std::optional<EntityId> value);

  void set_constant(const std::string& name, const EntityId& value);
  const EntityId& constant(const std::string& name) const;
  bool has_constant_value(const std::string& name) const { return constants_.count(name) > 0; }

  /// Deterministic text form of all interpretations (universe excluded).
  /// Structures sharing a universe are equal iff their keys are equal.
  std::string interpretation_key() const;

  /// Human-readable listing of the non-default atoms.
  std::string describe() const;

  friend bool operator==(const LogicalStructure& a, const LogicalStructure& b);

private:
  void check_tuple(const std::string& symbol, std::size_t arity, const Tuple& args) const;

  VocabularyPtr vocabulary_;
  std::shared_ptr<const Universe> universe_;
  std::map<std::string, std::map<Tuple, Truth>> relations_;
  std::map<std::string, std::map<Tuple, std::optional<EntityId>>> functions_;
  std::map<std::string, EntityId> constants_;
};

std::string format_atom(const std::string& relation, const Tuple& args);

/// Three-valued compatibility: every atom known in both structures agrees.
bool compatible(const LogicalStructure& a, const LogicalStructure& b);

} // namespace stamp::logic

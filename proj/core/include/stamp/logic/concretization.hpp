#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stamp/common/error.hpp"
#include "stamp/common/rng.hpp"
#include "stamp/logic/region.hpp"
#include "stamp/logic/structure.hpp"

namespace stamp::logic {

using Waypoints = std::vector<Payload>;

/// A concrete value for a symbolic argument: an entity, a point, or a path.
using ConcreteValue = std::variant<EntityId, Payload, Waypoints>;

struct SymbolKey {
  std::string argument;
  EntityId entity;
  auto operator<=>(const SymbolKey&) const = default;
};

/// sigma: symbolic argument -> concrete value. Partial maps are allowed.
using Concretization = std::map<SymbolKey, ConcreteValue>;

class NoSampleError : public Error {
public:
  using Error::Error;
};

/// Incremental sampler over rho(entity).
///
/// Finite regions are enumerated exhaustively in an rng-shuffled order;
/// continuous regions yield i.i.d. uniform samples (rejection for polygons).
class ConcretizationGenerator {
public:
  ConcretizationGenerator(Region region, Rng rng);

  /// Next value, or nullopt once a finite region is exhausted.
  /// Throws NoSampleError when the region is empty.
  std::optional<ConcreteValue> next();
  void restart();
  bool finite() const;
  std::size_t pulls() const { return pulls_; }

private:
  Region region_;
  Rng initial_;
  Rng rng_;
  std::vector<EntityId> order_;
  std::size_t cursor_ = 0;
  std::size_t pulls_ = 0;
};

/// Gamma_alpha as generators: one generator per abstract entity of `abstract_state`.
class Concretizer {
public:
  Concretizer(const LogicalStructure& abstract_state, const RepresentationFunction& rho, Rng rng);

  ConcretizationGenerator generator(const EntityId& abstract_entity);

private:
  const LogicalStructure* state_;
  const RepresentationFunction* rho_;
  Rng rng_;
};

bool satisfies_region(const Region& region, const ConcreteValue& value);

} // namespace stamp::logic

#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "stamp/common/error.hpp"
#include "stamp/logic/structure.hpp"

namespace stamp::logic {

struct ExtensionalRegion {
  std::set<EntityId> members;
};

/// Axis-aligned box over payloads, bounds inclusive.
struct BoxRegion {
  Payload lo;
  Payload hi;
};

/// Convex polygon over 2D payloads, counter-clockwise vertices. Membership is
/// the strict half-plane test `n_i . p + c_i < 0` for every edge.
struct PolygonRegion {
  std::vector<std::array<double, 2>> vertices;
};

using Region = std::variant<ExtensionalRegion, BoxRegion, PolygonRegion>;

class RegionError : public Error {
public:
  using Error::Error;
};

bool contains_point(const Region& region, const Payload& point);
bool contains(const Region& region, const EntityId& id, const Entity& entity);
bool is_empty(const Region& region);
/// Cardinality for extensional regions, length/area/volume otherwise.
double measure(const Region& region);

/// Outward boundary vectors (a, b, c) with `a x + b y + c < 0` inside.
std::vector<std::array<double, 3>> boundary_vectors(const PolygonRegion& polygon);

/// rho: abstract entity -> region of the concrete entities it represents.
class RepresentationFunction {
public:
  void set(const EntityId& abstract_entity, Region region, std::string sort = {});
  bool covers(const EntityId& abstract_entity) const { return regions_.count(abstract_entity) > 0; }
  const Region& region(const EntityId& abstract_entity) const;
  const std::string& sort(const EntityId& abstract_entity) const;
  const std::map<EntityId, Region>& regions() const { return regions_; }

  /// Throws RegionError if any declared region is empty.
  void validate() const;

private:
  std::map<EntityId, Region> regions_;
  std::map<EntityId, std::string> sorts_;
};

} // namespace stamp::logic

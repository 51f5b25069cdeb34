#include "stamp/logic/concretization.hpp"

#include <algorithm>

namespace stamp::logic {

ConcretizationGenerator::ConcretizationGenerator(Region region, Rng rng)
    : region_(std::move(region)), initial_(rng), rng_(rng) {
  restart();
}

bool ConcretizationGenerator::finite() const { return std::holds_alternative<ExtensionalRegion>(region_); }

void ConcretizationGenerator::restart() {
  rng_ = initial_;
  cursor_ = 0;
  pulls_ = 0;
  order_.clear();
  if (const auto* ext = std::get_if<ExtensionalRegion>(&region_)) {
    order_.assign(ext->members.begin(), ext->members.end());
    rng_.shuffle(order_.begin(), order_.end());
  }
}

std::optional<ConcreteValue> ConcretizationGenerator::next() {
  if (is_empty(region_)) {
    throw NoSampleError("cannot sample from an empty region");
  }
  ++pulls_;
  if (finite()) {
    if (cursor_ >= order_.size()) return std::nullopt;
    return ConcreteValue{order_[cursor_++]};
  }
  if (const auto* box = std::get_if<BoxRegion>(&region_)) {
    Payload p(box->lo.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = rng_.uniform(box->lo[i], box->hi[i]);
    return ConcreteValue{std::move(p)};
  }
  const auto& poly = std::get<PolygonRegion>(region_);
  double lo[2] = {poly.vertices[0][0], poly.vertices[0][1]};
  double hi[2] = {lo[0], lo[1]};
  for (const auto& v : poly.vertices) {
    for (int d = 0; d < 2; ++d) {
      lo[d] = std::min(lo[d], v[d]);
      hi[d] = std::max(hi[d], v[d]);
    }
  }
  for (;;) {
    Payload p{rng_.uniform(lo[0], hi[0]), rng_.uniform(lo[1], hi[1])};
    if (contains_point(region_, p)) return ConcreteValue{std::move(p)};
  }
}

Concretizer::Concretizer(const LogicalStructure& abstract_state, const RepresentationFunction& rho, Rng rng)
    : state_(&abstract_state), rho_(&rho), rng_(rng) {}

ConcretizationGenerator Concretizer::generator(const EntityId& abstract_entity) {
  if (!state_->has_entity(abstract_entity)) {
    throw RegionError("'" + abstract_entity + "' is not an entity of the abstract state");
  }
  return ConcretizationGenerator(rho_->region(abstract_entity), rng_.split());
}

bool satisfies_region(const Region& region, const ConcreteValue& value) {
  if (const auto* id = std::get_if<EntityId>(&value)) {
    const auto* ext = std::get_if<ExtensionalRegion>(&region);
    return ext && ext->members.count(*id) > 0;
  }
  if (const auto* p = std::get_if<Payload>(&value)) return contains_point(region, *p);
  const auto& path = std::get<Waypoints>(value);
  return !path.empty() && std::all_of(path.begin(), path.end(), [&](const Payload& q) { return contains_point(region, q); });
}

} // namespace stamp::logic

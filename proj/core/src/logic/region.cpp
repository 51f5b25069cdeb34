#include "stamp/logic/region.hpp"

#include <algorithm>
#include <cmath>

namespace stamp::logic {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double polygon_area(const PolygonRegion& p) {
  double twice = 0.0;
  const auto& v = p.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    twice += a[0] * b[1] - b[0] * a[1];
  }
  return 0.5 * twice;
}

} // namespace

std::vector<std::array<double, 3>> boundary_vectors(const PolygonRegion& polygon) {
  std::vector<std::array<double, 3>> out;
  const auto& v = polygon.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    // Outward normal of a counter-clockwise edge a->b is (dy, -dx).
    const double nx = b[1] - a[1];
    const double ny = -(b[0] - a[0]);
    out.push_back({nx, ny, -(nx * a[0] + ny * a[1])});
  }
  return out;
}

bool contains_point(const Region& region, const Payload& point) {
  return std::visit(
      overloaded{
          [](const ExtensionalRegion&) { return false; },
          [&](const BoxRegion& box) {
            if (point.size() != box.lo.size()) return false;
            for (std::size_t i = 0; i < point.size(); ++i) {
              if (point[i] < box.lo[i] || point[i] > box.hi[i]) return false;
            }
            return true;
          },
          [&](const PolygonRegion& poly) {
            if (point.size() != 2 || poly.vertices.size() < 3) return false;
            for (const auto& b : boundary_vectors(poly)) {
              if (b[0] * point[0] + b[1] * point[1] + b[2] >= 0.0) return false;
            }
            return true;
          },
      },
      region);
}

bool contains(const Region& region, const EntityId& id, const Entity& entity) {
  if (const auto* ext = std::get_if<ExtensionalRegion>(&region)) {
    return ext->members.count(id) > 0;
  }
  return !entity.payload.empty() && contains_point(region, entity.payload);
}

bool is_empty(const Region& region) {
  return std::visit(overloaded{
                        [](const ExtensionalRegion& r) { return r.members.empty(); },
                        [](const BoxRegion& r) {
                          if (r.lo.size() != r.hi.size() || r.lo.empty()) return true;
                          for (std::size_t i = 0; i < r.lo.size(); ++i) {
                            if (r.lo[i] > r.hi[i]) return true;
                          }
                          return false;
                        },
                        [](const PolygonRegion& r) { return r.vertices.size() < 3 || polygon_area(r) <= 0.0; },
                    },
                    region);
}

double measure(const Region& region) {
  if (is_empty(region)) return 0.0;
  return std::visit(overloaded{
                        [](const ExtensionalRegion& r) { return static_cast<double>(r.members.size()); },
                        [](const BoxRegion& r) {
                          double m = 1.0;
                          for (std::size_t i = 0; i < r.lo.size(); ++i) m *= r.hi[i] - r.lo[i];
                          return m;
                        },
                        [](const PolygonRegion& r) { return polygon_area(r); },
                    },
                    region);
}

void RepresentationFunction::set(const EntityId& abstract_entity, Region region, std::string sort) {
  if (abstract_entity.empty()) {
    throw RegionError("empty abstract entity id");
  }
  regions_[abstract_entity] = std::move(region);
  sorts_[abstract_entity] = std::move(sort);
}

const Region& RepresentationFunction::region(const EntityId& abstract_entity) const {
  auto it = regions_.find(abstract_entity);
  if (it == regions_.end()) {
    throw RegionError("no region declared for '" + abstract_entity + "'");
  }
  return it->second;
}

const std::string& RepresentationFunction::sort(const EntityId& abstract_entity) const {
  auto it = sorts_.find(abstract_entity);
  if (it == sorts_.end()) {
    throw RegionError("no region declared for '" + abstract_entity + "'");
  }
  return it->second;
}

void RepresentationFunction::validate() const {
  for (const auto& [id, region] : regions_) {
    if (is_empty(region)) {
      throw RegionError("region of '" + id + "' is empty");
    }
  }
}

} // namespace stamp::logic

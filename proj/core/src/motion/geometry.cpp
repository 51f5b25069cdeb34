#include "stamp/motion/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stamp::motion {

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a) { return std::hypot(a.x, a.y); }

Vec2 rotate(Vec2 v, double angle) {
  double c = std::cos(angle);
  double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

Shape transformed(const Shape& shape, Vec2 offset, double yaw) {
  if (const auto* d = std::get_if<Disc>(&shape)) {
    return Disc{rotate(d->center, yaw) + offset, d->radius};
  }
  ConvexPolygon out;
  for (Vec2 v : std::get<ConvexPolygon>(shape).vertices) out.vertices.push_back(rotate(v, yaw) + offset);
  return out;
}

bool contains_point(const ConvexPolygon& poly, Vec2 p) {
  const auto& v = poly.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Vec2 a = v[i];
    Vec2 b = v[(i + 1) % v.size()];
    if (cross(b - a, p - a) <= 0.0) return false;
  }
  return !v.empty();
}

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 ab = b - a;
  double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  return norm(p - (a + t * ab));
}

namespace {

bool disc_disc(const Disc& a, const Disc& b) { return norm(a.center - b.center) < a.radius + b.radius; }

bool disc_polygon(const Disc& d, const ConvexPolygon& poly) {
  if (contains_point(poly, d.center)) return true;
  const auto& v = poly.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (distance_to_segment(d.center, v[i], v[(i + 1) % v.size()]) < d.radius) return true;
  }
  return false;
}

// Separating axis test over the edge normals of both polygons.
bool separated_along_edges(const ConvexPolygon& a, const ConvexPolygon& b) {
  const auto& v = a.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Vec2 edge = v[(i + 1) % v.size()] - v[i];
    Vec2 axis{edge.y, -edge.x};
    double amax = -std::numeric_limits<double>::infinity();
    double amin = std::numeric_limits<double>::infinity();
    for (Vec2 p : a.vertices) {
      amax = std::max(amax, dot(p, axis));
      amin = std::min(amin, dot(p, axis));
    }
    double bmax = -std::numeric_limits<double>::infinity();
    double bmin = std::numeric_limits<double>::infinity();
    for (Vec2 p : b.vertices) {
      bmax = std::max(bmax, dot(p, axis));
      bmin = std::min(bmin, dot(p, axis));
    }
    if (amax <= bmin || bmax <= amin) return true;
  }
  return false;
}

bool polygon_polygon(const ConvexPolygon& a, const ConvexPolygon& b) {
  return !separated_along_edges(a, b) && !separated_along_edges(b, a);
}

} // namespace

bool intersects(const Shape& a, const Shape& b) {
  const auto* da = std::get_if<Disc>(&a);
  const auto* db = std::get_if<Disc>(&b);
  if (da && db) return disc_disc(*da, *db);
  if (da) return disc_polygon(*da, std::get<ConvexPolygon>(b));
  if (db) return disc_polygon(*db, std::get<ConvexPolygon>(a));
  return polygon_polygon(std::get<ConvexPolygon>(a), std::get<ConvexPolygon>(b));
}

std::pair<Vec2, Vec2> bounding_box(const Shape& shape) {
  if (const auto* d = std::get_if<Disc>(&shape)) {
    return {{d->center.x - d->radius, d->center.y - d->radius}, {d->center.x + d->radius, d->center.y + d->radius}};
  }
  const auto& v = std::get<ConvexPolygon>(shape).vertices;
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi{-lo.x, -lo.y};
  for (Vec2 p : v) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  return {lo, hi};
}

ConvexPolygon rectangle(Vec2 lo, Vec2 hi) { return {{lo, {hi.x, lo.y}, hi, {lo.x, hi.y}}}; }

void validate(const ConvexPolygon& poly) {
  const auto& v = poly.vertices;
  if (v.size() < 3) throw std::invalid_argument("polygon needs at least three vertices");
  for (std::size_t i = 0; i < v.size(); ++i) {
    Vec2 a = v[i];
    Vec2 b = v[(i + 1) % v.size()];
    Vec2 c = v[(i + 2) % v.size()];
    if (cross(b - a, c - b) <= 0.0) {
      throw std::invalid_argument("polygon must be convex with counter-clockwise vertices");
    }
  }
}

} // namespace stamp::motion

#pragma once

#include <utility>
#include <variant>
#include <vector>

namespace stamp::motion {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

double dot(Vec2 a, Vec2 b);
double cross(Vec2 a, Vec2 b);
double norm(Vec2 a);
Vec2 rotate(Vec2 v, double angle);

struct Disc {
  Vec2 center;
  double radius = 0.0;
};

/// Vertices in counter-clockwise order.
struct ConvexPolygon {
  std::vector<Vec2> vertices;
};

using Shape = std::variant<Disc, ConvexPolygon>;

/// Rotates about the origin by `yaw`, then translates by `offset`.
Shape transformed(const Shape& shape, Vec2 offset, double yaw = 0.0);

/// Interiors overlap. Shapes that only touch do not intersect.
bool intersects(const Shape& a, const Shape& b);

bool contains_point(const ConvexPolygon& poly, Vec2 p);
double distance_to_segment(Vec2 p, Vec2 a, Vec2 b);

/// Axis-aligned bounding box as {min, max}.
std::pair<Vec2, Vec2> bounding_box(const Shape& shape);

/// Counter-clockwise rectangle.
ConvexPolygon rectangle(Vec2 lo, Vec2 hi);

/// Throws std::invalid_argument for fewer than three vertices, clockwise order,
/// or a non-convex chain.
void validate(const ConvexPolygon& poly);

} // namespace stamp::motion

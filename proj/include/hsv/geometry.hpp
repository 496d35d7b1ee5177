#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace hsv {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double squared_distance(Point a, Point b) {
  return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
}
inline double distance(Point a, Point b) { return std::sqrt(squared_distance(a, b)); }
inline double norm(Point a) { return std::sqrt(dot(a, a)); }

/// A convex polygon with counterclockwise vertices. Only constructible
/// through validate(), so every instance satisfies the convexity and
/// non-degeneracy invariants.
class ConvexPolygon {
 public:
  std::span<const Point> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point& vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }
  double area() const { return area_; }
  Point centroid() const { return centroid_; }
  /// Largest bounding-box extent; the length unit for relative tolerances.
  double scale() const { return scale_; }

  /// Outward unit normal of edge i (vertex i to vertex i+1).
  Point edge_normal(std::size_t i) const;
  /// Signed distance from p to the supporting line of edge i, positive inside.
  double edge_clearance(std::size_t i, Point p) const;

  friend ConvexPolygon validate(std::span<const Point> raw);

 private:
  ConvexPolygon() = default;

  std::vector<Point> vertices_;
  double area_ = 0.0;
  Point centroid_;
  double scale_ = 0.0;
};

struct Circle {
  Point center;
  double radius = 0.0;
};

struct Diameter {
  double length = 0.0;
  std::pair<Point, Point> endpoints;
};

struct Incircle {
  double radius = 0.0;
  Point center;
};

/// The set {p in Omega : F(p) <= threshold}, sampled as a closed polyline
/// along rays from the seed. A sample that hits the polygon boundary before
/// the distance threshold is marked in on_domain_boundary.
struct ExclusionRegion {
  double threshold = 0.0;
  std::vector<Point> boundary;
  std::vector<bool> on_domain_boundary;
  Point seed;
  double tolerance = 0.0;

  /// Membership against the sampled polyline.
  bool contains(Point p) const;
};

/// Normalizes raw vertices into a CCW convex polygon: reverses clockwise
/// input, drops duplicate and collinear vertices. Throws TooFewVertices,
/// NonFiniteInput, DegenerateArea or NotConvex.
ConvexPolygon validate(std::span<const Point> raw);

/// Rotating calipers over antipodal vertex pairs.
Diameter diameter(const ConvexPolygon& poly);

/// Chebyshev center by a dense simplex solve of
/// max rho s.t. rho <= clearance to every edge line.
Incircle inradius(const ConvexPolygon& poly);

/// max over the boundary of |p - y|. For a polygon the maximum over each
/// edge is attained at an endpoint, so only vertices are visited.
double farthest_boundary_distance(const ConvexPolygon& poly, Point p);

/// Smallest circle containing all vertices (randomized incremental
/// construction with a fixed shuffle).
Circle min_enclosing_circle(const ConvexPolygon& poly);

/// Number of rays cast by exclusion_region.
inline constexpr int kRegionRays = 720;

/// Samples {p in Omega : F(p) <= ratio * diam}. ratio must lie in (0.5, 1).
ExclusionRegion exclusion_region(const ConvexPolygon& poly, double ratio);

/// Closed-region membership with slack 1e-12 * diam.
bool contains(const ConvexPolygon& poly, Point p);

}  // namespace hsv

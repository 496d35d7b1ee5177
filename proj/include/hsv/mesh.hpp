#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "hsv/geometry.hpp"

namespace hsv {

struct BoundaryEdge {
  int a = 0;  ///< tail vertex (CCW traversal)
  int b = 0;  ///< head vertex
  Point normal;      ///< outward unit normal
  int polygon_edge = 0;  ///< index of the source polygon edge
};

/// Conforming P1 triangulation of a convex polygon.
struct TriMesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;  ///< CCW vertex triples
  std::vector<BoundaryEdge> boundary_edges;   ///< one closed CCW loop
  std::vector<char> interior_mask;            ///< 1 for interior vertices
  double h_max = 0.0;                         ///< longest edge

  std::size_t vertex_count() const { return vertices.size(); }
  bool is_interior(int v) const { return interior_mask[static_cast<std::size_t>(v)] != 0; }
  double triangle_area(std::size_t t) const;
};

struct MeshQuality {
  double min_angle = 0.0;  ///< degrees
  double h_min = 0.0;
  double h_max = 0.0;
  std::size_t vertex_count = 0;
  std::size_t triangle_count = 0;
};

/// Quasi-uniform mesh with target edge length h, 0 < h < diam/4.
/// Boundary samples every <= h along each edge, hexagonal interior lattice
/// clipped at clearance h/2, Bowyer-Watson Delaunay triangulation and
/// interior smoothing. Throws InvalidH, or QualityFailure when the minimum
/// angle stays below kMinAngleDeg after the repair rounds.
TriMesh generate(const ConvexPolygon& poly, double h);

inline constexpr double kMinAngleDeg = 20.0;
/// Cap on Delaunay-refinement rounds after the initial triangulation.
inline constexpr int kRepairRounds = 40;

/// Uniform red refinement: every triangle split in four at edge midpoints.
TriMesh refine(const TriMesh& mesh);

MeshQuality quality(const TriMesh& mesh);

/// Delaunay triangulation of a point set (Bowyer-Watson with a far
/// super-triangle). Exposed for tests; the hull must be convex-position.
std::vector<std::array<int, 3>> delaunay(const std::vector<Point>& points);

/// Sorted neighbor lists in the edge graph.
std::vector<std::vector<int>> vertex_neighbors(const TriMesh& mesh);

/// Neighbors of an interior vertex in counterclockwise cyclic order.
std::vector<int> vertex_link(const TriMesh& mesh, const std::vector<std::vector<int>>& incident, int v);

/// Triangles incident to each vertex.
std::vector<std::vector<int>> vertex_triangles(const TriMesh& mesh);

/// Writes the HSV-MESH 1 text format.
void write_mesh(const TriMesh& mesh, std::ostream& out);

/// Uniform-grid point location on a mesh.
class MeshLocator {
 public:
  explicit MeshLocator(const TriMesh& mesh);

  /// Triangle containing p (with barycentric slack), or -1.
  int locate(Point p, std::array<double, 3>* barycentric = nullptr) const;
  /// P1 interpolation of vertex values at p; p must be inside the mesh.
  double interpolate(const std::vector<double>& values, Point p) const;

 private:
  const TriMesh& mesh_;
  Point origin_;
  double cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> buckets_;
};

}  // namespace hsv

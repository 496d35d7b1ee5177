#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "doctest.h"
#include "hsv/domains.hpp"
#include "hsv/error.hpp"
#include "hsv/mesh.hpp"

using hsv::Point;

namespace {

hsv::ConvexPolygon disk(int n) {
  hsv::DomainSpec s;
  s.kind = hsv::DomainKind::disk;
  s.polygonization_n = n;
  return hsv::realize(s);
}

hsv::ConvexPolygon box(double l, double w) {
  std::vector<Point> v{{0, 0}, {l, 0}, {l, w}, {0, w}};
  return hsv::validate(v);
}

double total_area(const hsv::TriMesh& m) {
  double a = 0.0;
  for (std::size_t t = 0; t < m.triangles.size(); ++t) a += m.triangle_area(t);
  return a;
}

std::size_t edge_count(const hsv::TriMesh& m) {
  std::set<std::pair<int, int>> edges;
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) edges.insert(std::minmax(t[k], t[(k + 1) % 3]));
  return edges.size();
}

void check_structure(const hsv::TriMesh& m, const hsv::ConvexPolygon& poly) {
  for (std::size_t t = 0; t < m.triangles.size(); ++t) CHECK(m.triangle_area(t) > 0.0);
  CHECK(total_area(m) == doctest::Approx(poly.area()).epsilon(1e-10));
  CHECK(m.vertex_count() - edge_count(m) + m.triangles.size() == 1);
  // boundary edges: one closed loop, unit outward normals
  const auto& be = m.boundary_edges;
  REQUIRE(!be.empty());
  for (std::size_t i = 0; i < be.size(); ++i) {
    CHECK(be[i].b == be[(i + 1) % be.size()].a);
    CHECK(std::abs(hsv::norm(be[i].normal) - 1.0) <= 1e-12);
    const Point mid = 0.5 * (m.vertices[be[i].a] + m.vertices[be[i].b]);
    CHECK(hsv::dot(be[i].normal, mid - poly.centroid()) > 0.0);
    CHECK_FALSE(m.is_interior(be[i].a));
  }
  std::set<int> on_loop;
  for (const auto& e : be) on_loop.insert(e.a);
  CHECK(on_loop.size() == be.size());
  std::size_t interior = 0;
  for (std::size_t v = 0; v < m.vertex_count(); ++v) interior += m.is_interior(static_cast<int>(v)) ? 1 : 0;
  CHECK(interior + be.size() == m.vertex_count());
}

}  // namespace

TEST_CASE("coarse unit square mesh covers the square") {
  const auto sq = box(1, 1);
  const auto m = hsv::generate(sq, 0.3);
  CHECK(std::abs(total_area(m) - 1.0) <= 1e-12);
  check_structure(m, sq);
  // 0.5 is not below diam/4 on the unit square
  CHECK_THROWS_AS(hsv::generate(sq, 0.5), hsv::Error);
}

TEST_CASE("invalid mesh sizes") {
  const auto sq = box(1, 1);
  CHECK_THROWS_WITH_AS(hsv::generate(sq, std::sqrt(2.0)), doctest::Contains("InvalidH"), hsv::Error);
  CHECK_THROWS_AS(hsv::generate(sq, 0.0), hsv::Error);
  CHECK_THROWS_AS(hsv::generate(sq, -0.1), hsv::Error);
  CHECK_THROWS_AS(hsv::generate(sq, NAN), hsv::Error);
}

TEST_CASE("disk mesh quality and density") {
  const auto poly = disk(256);
  const double h = 0.05;
  const auto m = hsv::generate(poly, h);
  check_structure(m, poly);
  const auto q = hsv::quality(m);
  CHECK(q.min_angle >= 20.0);
  const double estimate = 2 * poly.area() / (std::sqrt(3.0) * h * h);
  CHECK(m.vertex_count() >= 0.5 * estimate);
  CHECK(m.vertex_count() <= 2.0 * estimate);
  CHECK(q.h_max <= 2.0 * h);
}

TEST_CASE("meshes of assorted domains") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    hsv::DomainSpec s;
    s.kind = hsv::DomainKind::random_convex;
    s.seed = seed;
    s.sides = 5 + static_cast<int>(seed);
    const auto poly = hsv::realize(s);
    const auto m = hsv::generate(poly, hsv::diameter(poly).length / 30);
    check_structure(m, poly);
    CHECK(hsv::quality(m).min_angle >= 20.0);
  }
  hsv::DomainSpec e;
  e.kind = hsv::DomainKind::ellipse;
  e.a = 2;
  e.b = 1;
  e.polygonization_n = 256;
  const auto poly = hsv::realize(e);
  const auto m = hsv::generate(poly, 0.04);
  check_structure(m, poly);
  CHECK(hsv::quality(m).min_angle >= 20.0);
}

TEST_CASE("Delaunay property on random interior edges") {
  const auto poly = disk(128);
  const auto m = hsv::generate(poly, 0.08);
  std::map<std::pair<int, int>, std::vector<int>> opposite;
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) opposite[std::minmax(t[k], t[(k + 1) % 3])].push_back(t[(k + 2) % 3]);
  hsv::XorShift rng(5);
  std::vector<std::pair<std::pair<int, int>, std::vector<int>>> interior;
  for (const auto& kv : opposite)
    if (kv.second.size() == 2) interior.push_back(kv);
  REQUIRE(interior.size() > 100);
  const double scale = poly.scale();
  for (int trial = 0; trial < 100; ++trial) {
    const auto& [edge, opp] = interior[rng.next() % interior.size()];
    // triangle (a, b, c) in CCW order and the opposite vertex d
    Point a = m.vertices[edge.first], b = m.vertices[edge.second], c = m.vertices[opp[0]];
    const Point d = m.vertices[opp[1]];
    if (hsv::cross(b - a, c - a) < 0) std::swap(a, b);
    const double adx = a.x - d.x, ady = a.y - d.y, bdx = b.x - d.x, bdy = b.y - d.y, cdx = c.x - d.x, cdy = c.y - d.y;
    const double det = (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy) -
                       (bdx * bdx + bdy * bdy) * (adx * cdy - cdx * ady) +
                       (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady);
    CHECK(det <= 1e-10 * std::pow(scale, 4));
  }
}

TEST_CASE("raw Delaunay of a square grid") {
  std::vector<Point> pts;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4; ++j) pts.push_back({i * 0.25, j * 0.25});
  const auto tris = hsv::delaunay(pts);
  CHECK(tris.size() == 32);
}

TEST_CASE("refinement") {
  const auto poly = disk(64);
  const auto m = hsv::generate(poly, 0.2);
  const auto r = hsv::refine(m);
  CHECK(r.triangles.size() == 4 * m.triangles.size());
  CHECK(total_area(r) == doctest::Approx(total_area(m)).epsilon(1e-12));
  CHECK(std::abs(r.h_max - m.h_max / 2) <= 1e-15 * m.h_max);
  CHECK(hsv::quality(r).min_angle == doctest::Approx(hsv::quality(m).min_angle).epsilon(1e-9));
  check_structure(r, poly);
  CHECK(r.boundary_edges.size() == 2 * m.boundary_edges.size());
}

TEST_CASE("quality of single triangles") {
  hsv::TriMesh right;
  right.vertices = {{0, 0}, {1, 0}, {0, 1}};
  right.triangles = {{0, 1, 2}};
  right.interior_mask = {0, 0, 0};
  CHECK(hsv::quality(right).min_angle == doctest::Approx(45.0).epsilon(1e-12));
  hsv::TriMesh eq = right;
  eq.vertices[2] = {0.5, std::sqrt(3.0) / 2};
  CHECK(hsv::quality(eq).min_angle == doctest::Approx(60.0).epsilon(1e-12));
}

TEST_CASE("mesh generation is deterministic") {
  hsv::DomainSpec s;
  s.kind = hsv::DomainKind::random_convex;
  s.seed = 3;
  s.sides = 11;
  const auto poly = hsv::realize(s);
  std::ostringstream a, b;
  hsv::write_mesh(hsv::generate(poly, 0.07), a);
  hsv::write_mesh(hsv::generate(poly, 0.07), b);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("HSV-MESH 1", 0) == 0);
}

TEST_CASE("vertex links and point location") {
  const auto poly = disk(128);
  const auto m = hsv::generate(poly, 0.1);
  const auto inc = hsv::vertex_triangles(m);
  const auto nbr = hsv::vertex_neighbors(m);
  for (std::size_t v = 0; v < m.vertex_count(); ++v) {
    if (!m.is_interior(static_cast<int>(v))) continue;
    const auto link = hsv::vertex_link(m, inc, static_cast<int>(v));
    CHECK(link.size() == nbr[v].size());
    double turn = 0.0;
    for (std::size_t i = 0; i < link.size(); ++i) {
      const Point p = m.vertices[link[i]] - m.vertices[v], q = m.vertices[link[(i + 1) % link.size()]] - m.vertices[v];
      turn += std::atan2(hsv::cross(p, q), hsv::dot(p, q));
    }
    CHECK(turn == doctest::Approx(2 * std::numbers::pi).epsilon(1e-9));
  }
  hsv::MeshLocator loc(m);
  std::vector<double> f(m.vertex_count());
  for (std::size_t v = 0; v < f.size(); ++v) f[v] = 2 * m.vertices[v].x - 3 * m.vertices[v].y + 1;
  hsv::XorShift rng(9);
  for (int k = 0; k < 200; ++k) {
    const double r = 0.95 * std::sqrt(rng.uniform()), t = 2 * std::numbers::pi * rng.uniform();
    const Point p{r * std::cos(t), r * std::sin(t)};
    REQUIRE(loc.locate(p) >= 0);
    CHECK(loc.interpolate(f, p) == doctest::Approx(2 * p.x - 3 * p.y + 1).epsilon(1e-12));
  }
  CHECK(loc.locate({3, 3}) == -1);
}

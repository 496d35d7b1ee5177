#include "hsv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <string>
#include <utility>

#include "hsv/error.hpp"

namespace hsv {

double TriMesh::triangle_area(std::size_t t) const {
  const auto& tri = triangles[t];
  return 0.5 * cross(vertices[tri[1]] - vertices[tri[0]], vertices[tri[2]] - vertices[tri[0]]);
}

namespace {

long double orient(Point a, Point b, Point c) {
  const long double abx = static_cast<long double>(b.x) - a.x;
  const long double aby = static_cast<long double>(b.y) - a.y;
  const long double acx = static_cast<long double>(c.x) - a.x;
  const long double acy = static_cast<long double>(c.y) - a.y;
  return abx * acy - aby * acx;
}

// Positive when d lies strictly inside the circumcircle of the CCW triangle
// abc; values within rounding of zero (cocircular points) count as outside.
bool incircle(Point a, Point b, Point c, Point d) {
  const long double adx = static_cast<long double>(a.x) - d.x, ady = static_cast<long double>(a.y) - d.y;
  const long double bdx = static_cast<long double>(b.x) - d.x, bdy = static_cast<long double>(b.y) - d.y;
  const long double cdx = static_cast<long double>(c.x) - d.x, cdy = static_cast<long double>(c.y) - d.y;
  const long double ad = adx * adx + ady * ady;
  const long double bd = bdx * bdx + bdy * bdy;
  const long double cd = cdx * cdx + cdy * cdy;
  const long double det = adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
  const long double bound = ad * std::fabs(bdx * cdy - bdy * cdx) + bd * std::fabs(cdx * ady - cdy * adx) +
                            cd * std::fabs(adx * bdy - ady * bdx);
  return det > 1e-12L * bound;
}

struct Tri {
  std::array<int, 3> v;
  std::array<int, 3> nb;  // neighbor across the edge opposite v[i]
  bool alive = true;
};

class BowyerWatson {
 public:
  explicit BowyerWatson(const std::vector<Point>& input) : pts_(input), n_input_(static_cast<int>(input.size())) {
    double xmin = pts_[0].x, xmax = xmin, ymin = pts_[0].y, ymax = ymin;
    for (const Point& p : pts_) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    scale_ = std::max(xmax - xmin, ymax - ymin);
    const Point c{0.5 * (xmin + xmax), 0.5 * (ymin + ymax)};
    const double r = 100.0 * scale_;
    pts_.push_back({c.x, c.y + 2.0 * r});
    pts_.push_back({c.x - std::sqrt(3.0) * r, c.y - r});
    pts_.push_back({c.x + std::sqrt(3.0) * r, c.y - r});
    tris_.push_back({{n_input_, n_input_ + 1, n_input_ + 2}, {-1, -1, -1}, true});
  }

  std::vector<std::array<int, 3>> run() {
    for (int i = 0; i < n_input_; ++i) insert(i);
    std::vector<std::array<int, 3>> out;
    for (const Tri& t : tris_) {
      if (!t.alive) continue;
      if (t.v[0] >= n_input_ || t.v[1] >= n_input_ || t.v[2] >= n_input_) continue;
      out.push_back(t.v);
    }
    return out;
  }

 private:
  int locate(Point p) const {
    int t = last_;
    for (std::size_t steps = 0; steps < 4 * tris_.size() + 16; ++steps) {
      const Tri& tri = tris_[static_cast<std::size_t>(t)];
      int next = -1;
      for (int i = 0; i < 3; ++i) {
        const Point a = pts_[static_cast<std::size_t>(tri.v[(i + 1) % 3])];
        const Point b = pts_[static_cast<std::size_t>(tri.v[(i + 2) % 3])];
        if (orient(a, b, p) < 0.0L && tri.nb[i] >= 0) {
          next = tri.nb[i];
          break;
        }
      }
      if (next < 0) return t;
      t = next;
    }
    // Walk cycled (can only happen on degenerate input); fall back to a scan.
    for (std::size_t k = 0; k < tris_.size(); ++k) {
      const Tri& tri = tris_[k];
      if (!tri.alive) continue;
      bool inside = true;
      for (int i = 0; i < 3 && inside; ++i) {
        inside = orient(pts_[static_cast<std::size_t>(tri.v[(i + 1) % 3])],
                        pts_[static_cast<std::size_t>(tri.v[(i + 2) % 3])], p) >= 0.0L;
      }
      if (inside) return static_cast<int>(k);
    }
    throw Error(ErrorCode::InternalInvariantViolation, "Delaunay point location failed");
  }

  bool in_circle(int t, Point p) const {
    const Tri& tri = tris_[static_cast<std::size_t>(t)];
    return incircle(pts_[static_cast<std::size_t>(tri.v[0])], pts_[static_cast<std::size_t>(tri.v[1])],
                    pts_[static_cast<std::size_t>(tri.v[2])], p);
  }

  void insert(int pi) {
    const Point p = pts_[static_cast<std::size_t>(pi)];
    const int start = locate(p);

    std::vector<int> cavity{start};
    std::vector<char>& mark = mark_;
    mark.resize(tris_.size(), 0);
    mark[static_cast<std::size_t>(start)] = 1;
    // A point on an edge of the host triangle (split segments) must take the
    // triangle across that edge too, or a flat sliver is left behind.
    int twin = -1;
    {
      const Tri& host = tris_[static_cast<std::size_t>(start)];
      for (int i = 0; i < 3; ++i) {
        const Point a = pts_[static_cast<std::size_t>(host.v[(i + 1) % 3])];
        const Point b = pts_[static_cast<std::size_t>(host.v[(i + 2) % 3])];
        const long double len2 = static_cast<long double>(b.x - a.x) * (b.x - a.x) + static_cast<long double>(b.y - a.y) * (b.y - a.y);
        if (host.nb[i] >= 0 && std::fabs(orient(a, b, p)) <= 1e-10L * len2) {
          twin = host.nb[i];
          mark[static_cast<std::size_t>(twin)] = 1;
          cavity.push_back(twin);
          break;
        }
      }
    }
    for (std::size_t k = 0; k < cavity.size(); ++k) {
      const Tri& tri = tris_[static_cast<std::size_t>(cavity[k])];
      for (int i = 0; i < 3; ++i) {
        const int nb = tri.nb[i];
        if (nb < 0 || mark[static_cast<std::size_t>(nb)]) continue;
        if (in_circle(nb, p)) {
          mark[static_cast<std::size_t>(nb)] = 1;
          cavity.push_back(nb);
        }
      }
    }

    // The cavity must be star-shaped from p; drop triangles whose outer
    // edges p cannot see until it is.
    struct Edge {
      int a, b, outer, owner;
    };
    std::vector<Edge> rim;
    for (bool again = true; again;) {
      again = false;
      rim.clear();
      for (int t : cavity) {
        const Tri& tri = tris_[static_cast<std::size_t>(t)];
        for (int i = 0; i < 3; ++i) {
          const int nb = tri.nb[i];
          if (nb >= 0 && mark[static_cast<std::size_t>(nb)]) continue;
          rim.push_back({tri.v[(i + 1) % 3], tri.v[(i + 2) % 3], nb, t});
        }
      }
      for (const Edge& e : rim) {
        if (e.owner != start && e.owner != twin &&
            orient(pts_[static_cast<std::size_t>(e.a)], pts_[static_cast<std::size_t>(e.b)], p) <= 0.0L) {
          mark[static_cast<std::size_t>(e.owner)] = 0;
          cavity.erase(std::find(cavity.begin(), cavity.end(), e.owner));
          again = true;
          break;
        }
      }
    }

    std::map<int, int> by_tail, by_head;
    const int first_new = static_cast<int>(tris_.size());
    for (std::size_t k = 0; k < rim.size(); ++k) {
      const Edge& e = rim[k];
      const int id = first_new + static_cast<int>(k);
      tris_.push_back({{e.a, e.b, pi}, {-1, -1, e.outer}, true});
      if (e.outer >= 0) {
        Tri& o = tris_[static_cast<std::size_t>(e.outer)];
        for (int i = 0; i < 3; ++i) {
          if (o.v[(i + 1) % 3] == e.b && o.v[(i + 2) % 3] == e.a) o.nb[i] = id;
        }
      }
      by_tail[e.a] = id;
      by_head[e.b] = id;
    }
    for (std::size_t k = 0; k < rim.size(); ++k) {
      Tri& nt = tris_[static_cast<std::size_t>(first_new) + k];
      // Across (b, p): the new triangle whose tail is b.
      nt.nb[0] = by_tail.at(nt.v[1]);
      // Across (p, a): the new triangle whose head is a.
      nt.nb[1] = by_head.at(nt.v[0]);
    }
    for (int t : cavity) {
      tris_[static_cast<std::size_t>(t)].alive = false;
      mark[static_cast<std::size_t>(t)] = 0;
    }
    mark.resize(tris_.size(), 0);
    last_ = first_new;
  }

  std::vector<Point> pts_;
  int n_input_;
  double scale_ = 1.0;
  std::vector<Tri> tris_;
  std::vector<char> mark_;
  int last_ = 0;
};

double min_angle_deg(Point a, Point b, Point c) {
  const auto angle = [](Point p, Point q, Point r) {
    const Point u = q - p, v = r - p;
    return std::atan2(std::fabs(cross(u, v)), dot(u, v));
  };
  return std::min({angle(a, b, c), angle(b, c, a), angle(c, a, b)}) * 180.0 / std::numbers::pi;
}

Point circumcenter(Point a, Point b, Point c) {
  const Point ab = b - a, ac = c - a;
  const double d = 2.0 * cross(ab, ac);
  const double ab2 = dot(ab, ab), ac2 = dot(ac, ac);
  return a + Point{(ac.y * ab2 - ab.y * ac2) / d, (ab.x * ac2 - ac.x * ab2) / d};
}

double longest_edge(const TriMesh& mesh) {
  double h = 0.0;
  for (const auto& t : mesh.triangles) {
    for (int i = 0; i < 3; ++i) {
      h = std::max(h, distance(mesh.vertices[t[i]], mesh.vertices[t[(i + 1) % 3]]));
    }
  }
  return h;
}

TriMesh assemble_mesh(const ConvexPolygon& poly, const std::vector<Point>& pts, int boundary_count,
                      const std::vector<int>& boundary_edge_ids) {
  TriMesh mesh;
  mesh.vertices = pts;
  mesh.triangles = delaunay(pts);
  mesh.interior_mask.assign(pts.size(), 1);
  for (int i = 0; i < boundary_count; ++i) mesh.interior_mask[static_cast<std::size_t>(i)] = 0;
  for (int i = 0; i < boundary_count; ++i) {
    const int id = boundary_edge_ids[static_cast<std::size_t>(i)];
    mesh.boundary_edges.push_back({i, (i + 1) % boundary_count, poly.edge_normal(static_cast<std::size_t>(id)), id});
  }
  mesh.h_max = longest_edge(mesh);

  double total = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) total += mesh.triangle_area(t);
  if (std::fabs(total - poly.area()) > 1e-10 * poly.area()) {
    throw Error(ErrorCode::InternalInvariantViolation,
                "triangulation does not cover the polygon (area " + std::to_string(total) + " vs " +
                    std::to_string(poly.area()) + ")");
  }
  return mesh;
}

void smooth(std::vector<Point>& pts, int boundary_count, const std::vector<std::array<int, 3>>& tris, int passes) {
  std::vector<std::vector<int>> nbrs(pts.size());
  for (const auto& t : tris) {
    for (int i = 0; i < 3; ++i) {
      nbrs[static_cast<std::size_t>(t[i])].push_back(t[(i + 1) % 3]);
      nbrs[static_cast<std::size_t>(t[i])].push_back(t[(i + 2) % 3]);
    }
  }
  for (auto& n : nbrs) {
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
  }
  for (int pass = 0; pass < passes; ++pass) {
    std::vector<Point> next = pts;
    for (std::size_t v = static_cast<std::size_t>(boundary_count); v < pts.size(); ++v) {
      if (nbrs[v].empty()) continue;
      Point sum;
      for (int u : nbrs[v]) sum = sum + pts[static_cast<std::size_t>(u)];
      next[v] = (1.0 / static_cast<double>(nbrs[v].size())) * sum;
    }
    pts = std::move(next);
  }
}

}  // namespace

std::vector<std::array<int, 3>> delaunay(const std::vector<Point>& points) {
  if (points.size() < 3) throw Error(ErrorCode::TooFewVertices, "Delaunay needs at least 3 points");
  return BowyerWatson(points).run();
}

TriMesh generate(const ConvexPolygon& poly, double h) {
  const double diam = diameter(poly).length;
  if (!(h > 0.0) || !(h < diam / 4.0)) {
    throw Error(ErrorCode::InvalidH, "mesh size h must satisfy 0 < h < diam/4 = " + std::to_string(diam / 4.0));
  }
  std::vector<Point> pts;
  std::vector<int> edge_ids;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point a = poly.vertex(i), b = poly.vertex(i + 1);
    const int m = std::max(1, static_cast<int>(std::ceil(distance(a, b) / h - 1e-9)));
    for (int k = 0; k < m; ++k) {
      const double s = static_cast<double>(k) / m;
      pts.push_back(k == 0 ? a : a + s * (b - a));
      edge_ids.push_back(static_cast<int>(i));
    }
  }
  int boundary_count = static_cast<int>(pts.size());

  // Hexagonal lattice through the centroid, rows alternating direction so
  // consecutive insertions stay local.
  const Point g = poly.centroid();
  double xmin = g.x, xmax = g.x, ymin = g.y, ymax = g.y;
  for (const Point& v : poly.vertices()) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }
  const double dy = h * std::sqrt(3.0) / 2.0;
  const int j0 = static_cast<int>(std::floor((ymin - g.y) / dy)) - 1;
  const int j1 = static_cast<int>(std::ceil((ymax - g.y) / dy)) + 1;
  const int i0 = static_cast<int>(std::floor((xmin - g.x) / h)) - 2;
  const int i1 = static_cast<int>(std::ceil((xmax - g.x) / h)) + 2;
  for (int j = j0; j <= j1; ++j) {
    std::vector<Point> row;
    for (int i = i0; i <= i1; ++i) {
      const Point p{g.x + (i + ((j & 1) ? 0.5 : 0.0)) * h, g.y + j * dy};
      double clearance = std::numeric_limits<double>::infinity();
      for (std::size_t e = 0; e < poly.size(); ++e) clearance = std::min(clearance, poly.edge_clearance(e, p));
      if (clearance >= 0.5 * h) row.push_back(p);
    }
    if (j & 1) std::reverse(row.begin(), row.end());
    pts.insert(pts.end(), row.begin(), row.end());
  }

  auto tris = delaunay(pts);
  smooth(pts, boundary_count, tris, 10);
  TriMesh mesh = assemble_mesh(poly, pts, boundary_count, edge_ids);

  // Delaunay refinement in Ruppert's style: a bad triangle gets its
  // circumcenter inserted, unless that point encroaches a boundary segment
  // (lies in its diametral circle) or falls outside; then the segment is
  // split at its midpoint instead. Curved domains sample the boundary much
  // finer than h, so the size gap closes over several rounds.
  std::vector<Point> bpts(pts.begin(), pts.begin() + boundary_count);
  std::vector<Point> inner(pts.begin() + boundary_count, pts.end());
  for (int round = 0; round < kRepairRounds && quality(mesh).min_angle < kMinAngleDeg; ++round) {
    const std::size_t nb = bpts.size();
    std::vector<char> split(nb, 0);
    std::vector<Point> extra;
    std::vector<double> spacing;
    for (const auto& t : mesh.triangles) {
      const Point a = mesh.vertices[t[0]], b = mesh.vertices[t[1]], c = mesh.vertices[t[2]];
      if (min_angle_deg(a, b, c) >= kMinAngleDeg) continue;
      const double local = std::min({distance(a, b), distance(b, c), distance(c, a)});
      const Point cc = circumcenter(a, b, c);
      std::size_t encroached = nb;
      double worst = 0.0;
      for (std::size_t i = 0; i < nb; ++i) {
        const Point p = bpts[i], q = bpts[(i + 1) % nb];
        const double r2 = 0.25 * squared_distance(p, q);
        const double d2 = squared_distance(cc, 0.5 * (p + q));
        if (d2 < r2 && (encroached == nb || r2 - d2 > worst)) {
          encroached = i;
          worst = r2 - d2;
        }
      }
      if (encroached == nb && !contains(poly, cc)) {
        // outside without encroaching: split the nearest boundary segment
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < nb; ++i) {
          const double d2 = squared_distance(cc, 0.5 * (bpts[i] + bpts[(i + 1) % nb]));
          if (d2 < best) best = d2, encroached = i;
        }
      }
      if (encroached != nb) {
        split[encroached] = 1;
        continue;
      }
      bool crowded = false;
      for (std::size_t k = 0; k < extra.size() && !crowded; ++k) {
        crowded = distance(extra[k], cc) <= 0.5 * std::min(local, spacing[k]);
      }
      for (std::size_t k = 0; k < mesh.vertices.size() && !crowded; ++k) {
        crowded = distance(mesh.vertices[k], cc) <= 0.25 * local;
      }
      if (crowded) continue;
      extra.push_back(cc);
      spacing.push_back(local);
    }
    if (extra.empty() && std::none_of(split.begin(), split.end(), [](char c) { return c != 0; })) break;
    std::vector<Point> nbpts;
    std::vector<int> nedge;
    for (std::size_t i = 0; i < nb; ++i) {
      nbpts.push_back(bpts[i]);
      nedge.push_back(edge_ids[i]);
      if (split[i]) {
        nbpts.push_back(0.5 * (bpts[i] + bpts[(i + 1) % nb]));
        nedge.push_back(edge_ids[i]);
      }
    }
    std::vector<Point> kept = inner;
    for (const Point& p : extra) kept.push_back(p);
    bpts = std::move(nbpts);
    edge_ids = std::move(nedge);
    inner = std::move(kept);
    pts = bpts;
    pts.insert(pts.end(), inner.begin(), inner.end());
    boundary_count = static_cast<int>(bpts.size());
    mesh = assemble_mesh(poly, pts, boundary_count, edge_ids);
  }
  const double min_angle = quality(mesh).min_angle;
  if (min_angle < kMinAngleDeg) {
    throw Error(ErrorCode::QualityFailure, "minimum angle " + std::to_string(min_angle) + " deg below 20 deg");
  }
  return mesh;
}

TriMesh refine(const TriMesh& mesh) {
  TriMesh out;
  out.vertices = mesh.vertices;
  out.interior_mask = mesh.interior_mask;
  std::map<std::pair<int, int>, int> midpoint;
  const auto mid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(out.vertices.size());
    out.vertices.push_back(0.5 * (mesh.vertices[static_cast<std::size_t>(a)] + mesh.vertices[static_cast<std::size_t>(b)]));
    out.interior_mask.push_back(1);
    midpoint.emplace(key, id);
    return id;
  };
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    const int m = mid(e.a, e.b);
    out.interior_mask[static_cast<std::size_t>(m)] = 0;
    out.boundary_edges.push_back({e.a, m, e.normal, e.polygon_edge});
    out.boundary_edges.push_back({m, e.b, e.normal, e.polygon_edge});
  }
  out.triangles.reserve(4 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
    out.triangles.push_back({t[0], ab, ca});
    out.triangles.push_back({ab, t[1], bc});
    out.triangles.push_back({ca, bc, t[2]});
    out.triangles.push_back({ab, bc, ca});
  }
  out.h_max = longest_edge(out);
  return out;
}

MeshQuality quality(const TriMesh& mesh) {
  MeshQuality q;
  q.vertex_count = mesh.vertices.size();
  q.triangle_count = mesh.triangles.size();
  q.min_angle = 180.0;
  q.h_min = std::numeric_limits<double>::infinity();
  q.h_max = 0.0;
  for (const auto& t : mesh.triangles) {
    const Point a = mesh.vertices[t[0]], b = mesh.vertices[t[1]], c = mesh.vertices[t[2]];
    q.min_angle = std::min(q.min_angle, min_angle_deg(a, b, c));
    for (double len : {distance(a, b), distance(b, c), distance(c, a)}) {
      q.h_min = std::min(q.h_min, len);
      q.h_max = std::max(q.h_max, len);
    }
  }
  return q;
}

std::vector<std::vector<int>> vertex_neighbors(const TriMesh& mesh) {
  std::vector<std::vector<int>> nbrs(mesh.vertices.size());
  for (const auto& t : mesh.triangles) {
    for (int i = 0; i < 3; ++i) {
      nbrs[static_cast<std::size_t>(t[i])].push_back(t[(i + 1) % 3]);
      nbrs[static_cast<std::size_t>(t[i])].push_back(t[(i + 2) % 3]);
    }
  }
  for (auto& n : nbrs) {
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
  }
  return nbrs;
}

std::vector<std::vector<int>> vertex_triangles(const TriMesh& mesh) {
  std::vector<std::vector<int>> inc(mesh.vertices.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    for (int v : mesh.triangles[t]) inc[static_cast<std::size_t>(v)].push_back(static_cast<int>(t));
  }
  return inc;
}

std::vector<int> vertex_link(const TriMesh& mesh, const std::vector<std::vector<int>>& incident, int v) {
  // Each incident CCW triangle (v, a, b) contributes the link edge a -> b;
  // chaining those edges walks the link counterclockwise.
  std::map<int, int> next;
  for (int t : incident[static_cast<std::size_t>(v)]) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    int k = 0;
    while (tri[k] != v) ++k;
    next[tri[(k + 1) % 3]] = tri[(k + 2) % 3];
  }
  std::vector<int> link;
  if (next.empty()) return link;
  int cur = next.begin()->first;
  for (std::size_t i = 0; i < next.size(); ++i) {
    link.push_back(cur);
    auto it = next.find(cur);
    if (it == next.end()) break;
    cur = it->second;
  }
  return link;
}

void write_mesh(const TriMesh& mesh, std::ostream& out) {
  char buf[96];
  out << "HSV-MESH 1\n" << mesh.vertices.size() << ' ' << mesh.triangles.size() << '\n';
  for (const Point& p : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
    out << buf;
  }
  for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

MeshLocator::MeshLocator(const TriMesh& mesh) : mesh_(mesh) {
  double xmin = mesh.vertices[0].x, xmax = xmin, ymin = mesh.vertices[0].y, ymax = ymin;
  for (const Point& p : mesh.vertices) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  cell_ = std::max(mesh.h_max, 1e-12 * std::max(xmax - xmin, ymax - ymin));
  origin_ = {xmin, ymin};
  nx_ = static_cast<int>((xmax - xmin) / cell_) + 1;
  ny_ = static_cast<int>((ymax - ymin) / cell_) + 1;
  buckets_.assign(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_), {});
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    double bx0 = mesh.vertices[tri[0]].x, bx1 = bx0, by0 = mesh.vertices[tri[0]].y, by1 = by0;
    for (int k = 1; k < 3; ++k) {
      bx0 = std::min(bx0, mesh.vertices[tri[k]].x);
      bx1 = std::max(bx1, mesh.vertices[tri[k]].x);
      by0 = std::min(by0, mesh.vertices[tri[k]].y);
      by1 = std::max(by1, mesh.vertices[tri[k]].y);
    }
    const int ix0 = std::clamp(static_cast<int>((bx0 - xmin) / cell_), 0, nx_ - 1);
    const int ix1 = std::clamp(static_cast<int>((bx1 - xmin) / cell_), 0, nx_ - 1);
    const int iy0 = std::clamp(static_cast<int>((by0 - ymin) / cell_), 0, ny_ - 1);
    const int iy1 = std::clamp(static_cast<int>((by1 - ymin) / cell_), 0, ny_ - 1);
    for (int iy = iy0; iy <= iy1; ++iy) {
      for (int ix = ix0; ix <= ix1; ++ix) {
        buckets_[static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(ix)]
            .push_back(static_cast<int>(t));
      }
    }
  }
}

int MeshLocator::locate(Point p, std::array<double, 3>* barycentric) const {
  const int ix = static_cast<int>(std::floor((p.x - origin_.x) / cell_));
  const int iy = static_cast<int>(std::floor((p.y - origin_.y) / cell_));
  if (ix < 0 || iy < 0 || ix >= nx_ || iy >= ny_) return -1;
  int best = -1;
  double best_min = -std::numeric_limits<double>::infinity();
  std::array<double, 3> best_bary{};
  for (int t : buckets_[static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(ix)]) {
    const auto& tri = mesh_.triangles[static_cast<std::size_t>(t)];
    const Point a = mesh_.vertices[tri[0]], b = mesh_.vertices[tri[1]], c = mesh_.vertices[tri[2]];
    const double area2 = cross(b - a, c - a);
    const std::array<double, 3> bary{cross(b - p, c - p) / area2, cross(c - p, a - p) / area2,
                                     cross(a - p, b - p) / area2};
    const double lo = std::min({bary[0], bary[1], bary[2]});
    if (lo > best_min) {
      best_min = lo;
      best = t;
      best_bary = bary;
    }
  }
  if (best < 0 || best_min < -1e-9) return -1;
  if (barycentric) *barycentric = best_bary;
  return best;
}

double MeshLocator::interpolate(const std::vector<double>& values, Point p) const {
  std::array<double, 3> bary{};
  const int t = locate(p, &bary);
  if (t < 0) throw Error(ErrorCode::InvalidArgument, "interpolation point lies outside the mesh");
  const auto& tri = mesh_.triangles[static_cast<std::size_t>(t)];
  return bary[0] * values[static_cast<std::size_t>(tri[0])] + bary[1] * values[static_cast<std::size_t>(tri[1])] +
         bary[2] * values[static_cast<std::size_t>(tri[2])];
}

}  // namespace hsv

#include "hsv/hotspots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hsv/error.hpp"

namespace hsv {
namespace {

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

std::vector<int> boundary_vertices(const TriMesh& mesh) {
  std::vector<int> out;
  for (const BoundaryEdge& e : mesh.boundary_edges) out.push_back(e.a);
  return out;
}

// Farthest boundary distance through the mesh boundary loop. The loop
// contains every polygon vertex and nothing farther, so this equals the
// polygon's farthest_boundary_distance.
double farthest_on_mesh(const TriMesh& mesh, const std::vector<int>& boundary, Point p) {
  double best = 0.0;
  for (int v : boundary) best = std::max(best, squared_distance(p, mesh.vertices[static_cast<std::size_t>(v)]));
  return std::sqrt(best);
}

// +1 when psi(u) is above psi(v); ties resolved by vertex index.
int compare(const std::vector<double>& psi, int u, int v, double tie) {
  const double d = psi[static_cast<std::size_t>(u)] - psi[static_cast<std::size_t>(v)];
  if (std::fabs(d) <= tie) return u > v ? 1 : -1;
  return d > 0.0 ? 1 : -1;
}

}  // namespace

const char* to_string(CriticalKind kind) {
  switch (kind) {
    case CriticalKind::max: return "max";
    case CriticalKind::min: return "min";
    case CriticalKind::saddle: return "saddle";
  }
  return "unknown";
}

std::vector<CriticalPoint> find_critical_points(const TriMesh& mesh, const std::vector<double>& psi) {
  const double tie = 1e-12 * sup_norm(psi);
  const auto incident = vertex_triangles(mesh);
  const auto boundary = boundary_vertices(mesh);
  std::vector<CriticalPoint> out;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (!mesh.interior_mask[v]) continue;
    const std::vector<int> link = vertex_link(mesh, incident, static_cast<int>(v));
    if (link.empty()) continue;
    int alternations = 0;
    std::vector<int> signs;
    signs.reserve(link.size());
    for (int u : link) signs.push_back(compare(psi, u, static_cast<int>(v), tie));
    for (std::size_t i = 0; i < signs.size(); ++i) {
      if (signs[i] != signs[(i + 1) % signs.size()]) ++alternations;
    }
    if (alternations == 2) continue;
    CriticalPoint cp;
    cp.vertex_id = static_cast<int>(v);
    cp.location = mesh.vertices[v];
    cp.value = psi[v];
    cp.alternations = alternations;
    if (alternations == 0) {
      cp.kind = signs.front() > 0 ? CriticalKind::min : CriticalKind::max;
    } else {
      cp.kind = CriticalKind::saddle;
    }
    cp.farthest_distance = farthest_on_mesh(mesh, boundary, cp.location);
    out.push_back(cp);
  }
  return out;
}

std::vector<CriticalPoint> find_boundary_extrema(const TriMesh& mesh, const std::vector<double>& psi) {
  const double tie = 1e-12 * sup_norm(psi);
  const auto nbrs = vertex_neighbors(mesh);
  const auto boundary = boundary_vertices(mesh);
  std::vector<CriticalPoint> out;
  for (int v : boundary) {
    int above = 0, below = 0;
    for (int u : nbrs[static_cast<std::size_t>(v)]) (compare(psi, u, v, tie) > 0 ? above : below)++;
    if (above > 0 && below > 0) continue;
    CriticalPoint cp;
    cp.vertex_id = v;
    cp.location = mesh.vertices[static_cast<std::size_t>(v)];
    cp.value = psi[static_cast<std::size_t>(v)];
    cp.kind = above == 0 ? CriticalKind::max : CriticalKind::min;
    cp.farthest_distance = farthest_on_mesh(mesh, boundary, cp.location);
    out.push_back(cp);
  }
  return out;
}

TheoremVerdict theorem_check(const std::vector<CriticalPoint>& points, const ConvexPolygon& poly,
                             const bessel::SpectralConstants& constants, double h_max) {
  TheoremVerdict verdict;
  verdict.threshold = constants.c_excl * diameter(poly).length;
  verdict.tolerance = 2.0 * h_max;
  verdict.critical_points = points;
  for (const CriticalPoint& cp : points) {
    if (farthest_boundary_distance(poly, cp.location) <= verdict.threshold - verdict.tolerance) {
      verdict.violations.push_back(cp);
    }
  }
  verdict.pass = verdict.violations.empty();
  return verdict;
}

ComparisonField build_comparison(const TriMesh& mesh, const std::vector<double>& psi, double mu2, Point x0) {
  double xmin = mesh.vertices[0].x, xmax = xmin, ymin = mesh.vertices[0].y, ymax = ymin;
  int anchor = -1;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const Point p = mesh.vertices[v];
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
    const double d = distance(p, x0);
    if (d < best) {
      best = d;
      anchor = static_cast<int>(v);
    }
  }
  const double scale = std::max(xmax - xmin, ymax - ymin);
  if (best > 1e-12 * scale) throw Error(ErrorCode::AnchorNotVertex, "comparison anchor is not a mesh vertex");

  ComparisonField field;
  field.anchor = mesh.vertices[static_cast<std::size_t>(anchor)];
  field.anchor_vertex = anchor;
  field.mu2 = mu2;
  field.negated = psi[static_cast<std::size_t>(anchor)] < 0.0;
  const double sign = field.negated ? -1.0 : 1.0;
  field.psi_at_anchor = sign * psi[static_cast<std::size_t>(anchor)];
  const double k = std::sqrt(mu2);
  field.values.resize(mesh.vertices.size());
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const double r = distance(mesh.vertices[v], field.anchor);
    field.values[v] = field.psi_at_anchor * bessel::j0(k * r) - sign * psi[v];
  }
  return field;
}

int branch_count(const TriMesh& mesh, const std::vector<double>& values, Point anchor, double radius) {
  const MeshLocator locator(mesh);
  const double tie = 1e-10 * sup_norm(values);
  std::vector<int> signs;
  for (int i = 0; i < kBranchSamples; ++i) {
    const double t = 2.0 * std::numbers::pi * i / kBranchSamples;
    const Point p = anchor + radius * Point{std::cos(t), std::sin(t)};
    if (locator.locate(p) < 0) {
      throw Error(ErrorCode::CircleOutsideDomain, "branch-count circle leaves the domain");
    }
    const double w = locator.interpolate(values, p);
    if (std::fabs(w) > tie) signs.push_back(w > 0.0 ? 1 : -1);
  }
  int changes = 0;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (signs[i] != signs[(i + 1) % signs.size()]) ++changes;
  }
  return changes;
}

int branch_count(const TriMesh& mesh, const ComparisonField& field, double radius) {
  return branch_count(mesh, field.values, field.anchor, radius);
}

bool NodalDecomposition::has_interior_domain() const {
  return std::any_of(components.begin(), components.end(), [](const NodalComponent& c) { return !c.touches_boundary; });
}

NodalDecomposition nodal_decomposition(const TriMesh& mesh, const std::vector<double>& w) {
  NodalDecomposition out;
  const double tie = 1e-12 * sup_norm(w);
  const std::size_t n = mesh.vertices.size();
  const auto sign_of = [&](std::size_t v) { return std::fabs(w[v]) <= tie ? 0 : (w[v] > 0.0 ? 1 : -1); };

  for (const auto& tri : mesh.triangles) {
    Point crossing[3];
    int count = 0;
    for (int i = 0; i < 3; ++i) {
      const auto a = static_cast<std::size_t>(tri[i]), b = static_cast<std::size_t>(tri[(i + 1) % 3]);
      if ((w[a] > 0.0) == (w[b] > 0.0)) continue;
      const double s = w[a] / (w[a] - w[b]);
      crossing[count++] = mesh.vertices[a] + s * (mesh.vertices[b] - mesh.vertices[a]);
    }
    if (count == 2) out.segments.push_back({crossing[0], crossing[1]});
  }

  // Clearance of every vertex from the boundary lines.
  std::vector<const BoundaryEdge*> sides;
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    if (sides.empty() || sides.back()->polygon_edge != e.polygon_edge) sides.push_back(&e);
  }
  const auto near_boundary = [&](std::size_t v) {
    if (!mesh.interior_mask[v]) return true;
    for (const BoundaryEdge* e : sides) {
      if (dot(e->normal, mesh.vertices[static_cast<std::size_t>(e->a)] - mesh.vertices[v]) <= mesh.h_max) return true;
    }
    return false;
  };

  const auto nbrs = vertex_neighbors(mesh);
  out.label.assign(n, 0);
  for (std::size_t seed = 0; seed < n; ++seed) {
    const int s = sign_of(seed);
    if (s == 0 || out.label[seed] != 0) continue;
    NodalComponent comp;
    comp.sign = s;
    const int id = static_cast<int>(out.components.size()) + 1;
    std::vector<std::size_t> stack{seed};
    out.label[seed] = id;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      comp.vertices.push_back(static_cast<int>(v));
      if (!comp.touches_boundary && near_boundary(v)) comp.touches_boundary = true;
      for (int u : nbrs[v]) {
        const auto uu = static_cast<std::size_t>(u);
        if (out.label[uu] == 0 && sign_of(uu) == s) {
          out.label[uu] = id;
          stack.push_back(uu);
        }
      }
    }
    std::sort(comp.vertices.begin(), comp.vertices.end());
    if (s > 0) ++out.positive_component_count;
    out.components.push_back(std::move(comp));
  }
  return out;
}

std::vector<double> boundary_flux(const ComparisonField& field, const TriMesh& mesh) {
  if (!mesh.is_interior(field.anchor_vertex)) {
    throw Error(ErrorCode::AnchorOnBoundary, "boundary flux needs an interior anchor");
  }
  const double k = std::sqrt(field.mu2);
  std::vector<double> flux;
  flux.reserve(mesh.boundary_edges.size());
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    const Point x = 0.5 * (mesh.vertices[static_cast<std::size_t>(e.a)] + mesh.vertices[static_cast<std::size_t>(e.b)]);
    const Point d = x - field.anchor;
    const double r = norm(d);
    flux.push_back(field.psi_at_anchor * k * bessel::j0_derivative(k * r) * dot(d, e.normal) / r);
  }
  return flux;
}

double support_positivity(const ConvexPolygon& poly, Point x0) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) best = std::min(best, poly.edge_clearance(i, x0));
  return best;
}

namespace {

Eigen::VectorXd restrict_to(const std::vector<double>& w, const NodalDecomposition& nodal, int component) {
  if (component < 0 || component >= static_cast<int>(nodal.components.size()) ||
      nodal.components[static_cast<std::size_t>(component)].sign <= 0) {
    throw Error(ErrorCode::NotPositiveComponent, "component " + std::to_string(component) + " is not a positive nodal domain");
  }
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(w.size()));
  for (int v : nodal.components[static_cast<std::size_t>(component)].vertices) {
    phi(v) = w[static_cast<std::size_t>(v)];
  }
  if (phi.maxCoeff() <= 0.0) {
    throw Error(ErrorCode::NotPositiveComponent, "w vanishes on component " + std::to_string(component));
  }
  return phi;
}

}  // namespace

RayleighDefect rayleigh_defect(const TriMesh& mesh, const SparseSym& k_mat, const SparseSym& m_mat,
                               const ComparisonField& field, const NodalDecomposition& nodal, int component,
                               const std::vector<double>& flux) {
  const Eigen::VectorXd phi = restrict_to(field.values, nodal, component);
  RayleighDefect d;
  d.dirichlet_energy = phi.dot(k_mat * phi);
  d.mass_energy = field.mu2 * phi.dot(m_mat * phi);
  for (std::size_t i = 0; i < mesh.boundary_edges.size() && i < flux.size(); ++i) {
    const BoundaryEdge& e = mesh.boundary_edges[i];
    const double mid = 0.5 * (phi(e.a) + phi(e.b));
    if (mid == 0.0) continue;
    const double len = distance(mesh.vertices[static_cast<std::size_t>(e.a)], mesh.vertices[static_cast<std::size_t>(e.b)]);
    d.boundary_term += mid * flux[i] * len;
  }
  return d;
}

double combined_quotient(const SparseSym& k_mat, const SparseSym& m_mat, const std::vector<double>& w,
                         const NodalDecomposition& nodal, int first, int second) {
  const Eigen::VectorXd phi1 = restrict_to(w, nodal, first);
  const Eigen::VectorXd phi2 = restrict_to(w, nodal, second);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(phi1.size());
  const double m1 = ones.dot(m_mat * phi1);
  const double m2 = ones.dot(m_mat * phi2);
  const Eigen::VectorXd u = m2 * phi1 - m1 * phi2;
  return rayleigh(k_mat, m_mat, u);
}

InequalityReport inequality_checks(double mu2, double lambda1, const ConvexPolygon& poly,
                                   const bessel::SpectralConstants& c) {
  const double diam = diameter(poly).length;
  InequalityReport r;
  r.mu2_diam2 = mu2 * diam * diam;
  r.kroger_margin = 4.0 * c.j0 * c.j0 - r.mu2_diam2;
  r.payne_weinberger_margin = r.mu2_diam2 - std::numbers::pi * std::numbers::pi;
  r.strong_kroger_holds = r.mu2_diam2 <= c.j1 * c.j1;
  r.szego_weinberger_margin = std::numbers::pi * c.jp11 * c.jp11 / poly.area() - mu2;
  r.polya_margin = lambda1 - mu2;
  r.hot_spots_certified = r.strong_kroger_holds;
  return r;
}

double steinerberger_diagnostic(const TriMesh& mesh, const std::vector<double>& psi, const ConvexPolygon& poly) {
  const auto [lo, hi] = std::minmax_element(psi.begin(), psi.end());
  const double cutoff = *hi - 1e-9 * (*hi - *lo);
  const Diameter diam = diameter(poly);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < psi.size(); ++v) {
    if (psi[v] < cutoff) continue;
    best = std::min({best, distance(mesh.vertices[v], diam.endpoints.first),
                     distance(mesh.vertices[v], diam.endpoints.second)});
  }
  return best / inradius(poly).radius;
}

}  // namespace hsv

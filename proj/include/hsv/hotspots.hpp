#pragma once

#include <optional>
#include <vector>

#include "hsv/bessel.hpp"
#include "hsv/fem.hpp"
#include "hsv/geometry.hpp"
#include "hsv/mesh.hpp"

namespace hsv {

enum class CriticalKind { max, min, saddle };

const char* to_string(CriticalKind kind);

struct CriticalPoint {
  int vertex_id = -1;
  Point location;
  double value = 0.0;
  CriticalKind kind = CriticalKind::max;
  int alternations = 0;
  double farthest_distance = 0.0;  ///< max over the boundary of |location - y|
};

/// Combinatorial critical vertices of the P1 interpolant: the cyclic sign
/// sequence of psi(neighbor) - psi(v) around each interior link, with ties
/// (|diff| <= 1e-12 ||psi||_inf) broken by vertex index. No alternation
/// means an extremum, four or more a saddle. Boundary vertices are skipped.
std::vector<CriticalPoint> find_critical_points(const TriMesh& mesh, const std::vector<double>& psi);

/// Boundary vertices where psi is a strict local max or min over the edge
/// neighbors (the expected hot spots, reported separately).
std::vector<CriticalPoint> find_boundary_extrema(const TriMesh& mesh, const std::vector<double>& psi);

struct TheoremVerdict {
  double threshold = 0.0;  ///< c_excl * diam
  double tolerance = 0.0;  ///< 2 h_max
  std::vector<CriticalPoint> critical_points;
  std::vector<CriticalPoint> violations;
  bool pass = true;
};

/// Flags points with F(x0) <= c_excl * diam - 2 h_max.
TheoremVerdict theorem_check(const std::vector<CriticalPoint>& points, const ConvexPolygon& poly,
                             const bessel::SpectralConstants& constants, double h_max);

/// w = psi(x0) J0(sqrt(mu2) |x - x0|) - psi(x) on mesh vertices, with psi
/// negated first when psi(x0) < 0.
struct ComparisonField {
  Point anchor;
  int anchor_vertex = -1;
  double mu2 = 0.0;
  double psi_at_anchor = 0.0;
  bool negated = false;
  std::vector<double> values;
};

/// Throws AnchorNotVertex when no vertex lies within 1e-12 * scale of x0.
ComparisonField build_comparison(const TriMesh& mesh, const std::vector<double>& psi, double mu2, Point x0);

/// Cyclic sign changes of the P1 interpolant on 256 points of the circle
/// of given radius about the anchor. Throws CircleOutsideDomain.
int branch_count(const TriMesh& mesh, const std::vector<double>& values, Point anchor, double radius);
int branch_count(const TriMesh& mesh, const ComparisonField& field, double radius);

inline constexpr int kBranchSamples = 256;

struct NodalSegment {
  Point a;
  Point b;
};

struct NodalComponent {
  int sign = 0;  ///< +1 or -1
  std::vector<int> vertices;
  bool touches_boundary = false;
};

struct NodalDecomposition {
  std::vector<NodalSegment> segments;
  /// 0 for tie vertices (|w| <= tie tolerance), otherwise component index + 1.
  std::vector<int> label;
  std::vector<NodalComponent> components;
  int positive_component_count = 0;

  /// True when some component stays away from the boundary.
  bool has_interior_domain() const;
};

NodalDecomposition nodal_decomposition(const TriMesh& mesh, const std::vector<double>& w);

/// Analytic normal derivative of w at each boundary-edge midpoint:
/// psi(x0) sqrt(mu2) J0'(sqrt(mu2) r) ((x - x0) . nu) / r.
/// Throws AnchorOnBoundary.
std::vector<double> boundary_flux(const ComparisonField& field, const TriMesh& mesh);

/// min over edges of (x - x0) . nu, i.e. the smallest clearance of x0.
double support_positivity(const ConvexPolygon& poly, Point x0);

struct RayleighDefect {
  double dirichlet_energy = 0.0;  ///< phi^T K phi
  double mass_energy = 0.0;       ///< mu2 phi^T M phi
  double boundary_term = 0.0;     ///< sum of w * flux * length over the component's boundary edges
  double ratio() const { return dirichlet_energy / mass_energy; }
};

/// phi = w restricted to a positive nodal component. Throws
/// NotPositiveComponent for a negative, empty or out-of-range component.
RayleighDefect rayleigh_defect(const TriMesh& mesh, const SparseSym& k_mat, const SparseSym& m_mat,
                               const ComparisonField& field, const NodalDecomposition& nodal, int component,
                               const std::vector<double>& flux);

/// Rayleigh quotient of the zero-mean combination a phi_1 + b phi_2 of two
/// positive components (a = 1^T M phi_2, b = -1^T M phi_1).
double combined_quotient(const SparseSym& k_mat, const SparseSym& m_mat, const std::vector<double>& w,
                         const NodalDecomposition& nodal, int first, int second);

struct InequalityReport {
  double mu2_diam2 = 0.0;
  double kroger_margin = 0.0;            ///< 4 j0^2 - mu2 diam^2
  double payne_weinberger_margin = 0.0;  ///< mu2 diam^2 - pi^2
  bool strong_kroger_holds = false;      ///< mu2 diam^2 <= j1^2
  double szego_weinberger_margin = 0.0;  ///< pi j'11^2 / area - mu2
  double polya_margin = 0.0;             ///< lambda1 - mu2
  bool hot_spots_certified = false;
};

InequalityReport inequality_checks(double mu2, double lambda1, const ConvexPolygon& poly,
                                   const bessel::SpectralConstants& constants);

/// Distance from the vertices attaining max psi (within 1e-9 of the range)
/// to the nearer diameter endpoint, divided by the inradius.
double steinerberger_diagnostic(const TriMesh& mesh, const std::vector<double>& psi, const ConvexPolygon& poly);

}  // namespace hsv

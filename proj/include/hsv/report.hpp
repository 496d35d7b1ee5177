#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hsv/domains.hpp"
#include "hsv/error.hpp"
#include "hsv/hotspots.hpp"
#include "json.hpp"

namespace hsv {

inline constexpr int kReportSchema = 1;

struct VerifyOptions {
  double h = 0.05;
  int refinements = 0;
  int k = 4;  ///< Neumann pairs, at least 3 (mu_1 = 0 included)
  double tol = 1e-8;
  std::uint64_t seed = 1;  ///< starting block and eigenspace samples
  bool timings = false;    ///< add wall-clock timings (breaks byte-determinism)
  bool dump_mesh = false;  ///< write mesh.txt (HSV-MESH 1) next to the report
  /// Negative control: a synthetic critical point at the vertex nearest to
  /// this location is added to the theorem check.
  std::optional<Point> planted;
};

struct GeometrySummary {
  std::vector<Point> polygon;
  double diameter = 0.0;
  std::pair<Point, Point> diameter_endpoints;
  double inradius = 0.0;
  Point incenter;
  double area = 0.0;
  Circle min_enclosing_circle;
  double exclusion_ratio = 0.0;
  double exclusion_threshold = 0.0;
  std::vector<Point> exclusion_boundary;
  std::vector<bool> exclusion_on_domain_boundary;
};

struct MeshSummary {
  double h = 0.0;
  int refinements = 0;
  MeshQuality quality;
};

struct SpectrumSummary {
  std::vector<double> neumann;
  std::vector<double> neumann_residuals;
  double lambda1 = 0.0;
  double lambda1_residual = 0.0;
  double relative_gap = 0.0;  ///< (mu_3 - mu_2) / mu_2
  bool degenerate = false;    ///< relative_gap < 1e-6
  int neumann_iterations = 0;
  int dirichlet_iterations = 0;
};

struct ComparisonDiagnostics {
  std::string anchor_source;  ///< "critical_point", "planted" or "diagnostic_only"
  int anchor_vertex = -1;
  Point anchor;
  double psi_at_anchor = 0.0;
  bool negated = false;
  bool degenerate_anchor = false;  ///< psi vanishes at the anchor; w = -psi and no four-branch claim
  double farthest_distance = 0.0;
  double sqrt_mu2_times_farthest = 0.0;
  double support_positivity = 0.0;
  double branch_radius = 0.0;
  std::optional<int> branch_count;  ///< absent when the circle leaves the domain
  double flux_min = 0.0;
  double flux_max = 0.0;
  int nodal_components = 0;
  int positive_components = 0;
  std::vector<bool> component_touches_boundary;
  std::vector<RayleighDefect> rayleigh_defects;
  std::optional<double> combined_quotient;
  std::vector<NodalSegment> nodal_lines;
};

struct EigenvectorReport {
  std::string label;
  std::vector<CriticalPoint> interior_critical_points;
  std::vector<CriticalPoint> boundary_extrema;
  TheoremVerdict verdict;
  int nodal_components = 0;
  bool all_components_touch_boundary = true;
  double steinerberger = 0.0;
  std::vector<ComparisonDiagnostics> comparisons;
  std::vector<NodalSegment> nodal_lines;
};

struct VerificationReport {
  int schema = kReportSchema;
  DomainSpec domain;
  GeometrySummary geometry;
  MeshSummary mesh;
  SpectrumSummary spectrum;
  InequalityReport inequalities;
  std::vector<CriticalPoint> planted_points;
  std::vector<EigenvectorReport> eigenvectors;
  TheoremVerdict verdict;  ///< over every analyzed eigenvector plus planted points
  std::vector<std::string> warnings;
  std::map<std::string, double> timings_ms;
};

/// Runs the whole pipeline for one domain. Throws hsv::Error on stage
/// failures (message prefixed with the stage name).
VerificationReport run_verify(const DomainSpec& spec, const VerifyOptions& opts);

/// Loads the spec, runs the pipeline and writes report.json into out_dir.
VerificationReport run_verify(const std::filesystem::path& spec_path, const VerifyOptions& opts,
                              const std::filesystem::path& out_dir);

nlohmann::json to_json(const VerificationReport& report);
VerificationReport report_from_json(const nlohmann::json& j);

/// Serialized report text (stable key order, round-trip exact doubles).
std::string dump_report(const VerificationReport& report);

struct RenderOptions {
  bool show_nodal = false;
  bool show_mesh = false;
};

/// Figure-style SVG: domain in gray, exclusion region in white, interior
/// critical points red, boundary extrema blue, optional nodal lines and mesh.
std::string render_svg(const VerificationReport& report, const RenderOptions& opts, const TriMesh* mesh = nullptr);

/// Rebuilds the mesh a report was computed on (deterministic).
TriMesh rebuild_mesh(const VerificationReport& report);

struct SweepSummary {
  int count = 0;
  std::uint64_t seed = 0;
  double h_rel = 0.0;
  int pass_count = 0;
  int violation_count = 0;
  int failure_count = 0;
  int strong_kroger_count = 0;
  double min_kroger_margin = 0.0;
  double min_payne_weinberger_margin = 0.0;
  double min_polya_margin = 0.0;
  double min_szego_weinberger_margin = 0.0;
  nlohmann::json domains = nlohmann::json::array();
};

/// Seeded random convex domains, each verified with h = h_rel * diam.
/// Per-domain reports go to out_dir/domain_NNN/report.json (when out_dir is
/// non-empty); failures are recorded, not thrown. Parallelism is capped by
/// HSV_THREADS.
SweepSummary run_sweep(int count, std::uint64_t seed, double h_rel, const VerifyOptions& base,
                       const std::filesystem::path& out_dir);

nlohmann::json to_json(const SweepSummary& summary);

/// Domain spec used for sweep entry `index`.
DomainSpec sweep_domain(std::uint64_t seed, int index);

/// Exit status for the CLI: 1 input, 2 solver/internal, 3 theorem violation.
int exit_code_for(ErrorCode code);

}  // namespace hsv

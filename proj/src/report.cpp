#include "hsv/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "hsv/error.hpp"

namespace hsv {

using nlohmann::json;

// ---------------------------------------------------------------- JSON

void to_json(json& j, const Point& p) { j = json::array({p.x, p.y}); }
void from_json(const json& j, Point& p) {
  p.x = j.at(0).get<double>();
  p.y = j.at(1).get<double>();
}

void to_json(json& j, const Circle& c) { j = {{"center", c.center}, {"radius", c.radius}}; }
void from_json(const json& j, Circle& c) {
  j.at("center").get_to(c.center);
  j.at("radius").get_to(c.radius);
}

void to_json(json& j, const NodalSegment& s) { j = json::array({s.a.x, s.a.y, s.b.x, s.b.y}); }
void from_json(const json& j, NodalSegment& s) {
  s.a = {j.at(0).get<double>(), j.at(1).get<double>()};
  s.b = {j.at(2).get<double>(), j.at(3).get<double>()};
}

void to_json(json& j, const CriticalPoint& c) {
  j = {{"vertex", c.vertex_id},     {"location", c.location},         {"value", c.value},
       {"kind", to_string(c.kind)}, {"alternations", c.alternations}, {"farthest_distance", c.farthest_distance}};
}
void from_json(const json& j, CriticalPoint& c) {
  j.at("vertex").get_to(c.vertex_id);
  j.at("location").get_to(c.location);
  j.at("value").get_to(c.value);
  const auto kind = j.at("kind").get<std::string>();
  c.kind = kind == "max" ? CriticalKind::max : kind == "min" ? CriticalKind::min : CriticalKind::saddle;
  j.at("alternations").get_to(c.alternations);
  j.at("farthest_distance").get_to(c.farthest_distance);
}

void to_json(json& j, const TheoremVerdict& v) {
  j = {{"threshold", v.threshold},
       {"tolerance", v.tolerance},
       {"critical_point_count", v.critical_points.size()},
       {"violations", v.violations},
       {"pass", v.pass}};
}
void from_json(const json& j, TheoremVerdict& v) {
  j.at("threshold").get_to(v.threshold);
  j.at("tolerance").get_to(v.tolerance);
  j.at("violations").get_to(v.violations);
  j.at("pass").get_to(v.pass);
  // Only the count of checked points is serialized; the points themselves
  // live in the per-eigenvector lists.
  v.critical_points.assign(j.at("critical_point_count").get<std::size_t>(), CriticalPoint{});
}

void to_json(json& j, const RayleighDefect& d) {
  j = {{"dirichlet_energy", d.dirichlet_energy}, {"mass_energy", d.mass_energy}, {"boundary_term", d.boundary_term}};
}
void from_json(const json& j, RayleighDefect& d) {
  j.at("dirichlet_energy").get_to(d.dirichlet_energy);
  j.at("mass_energy").get_to(d.mass_energy);
  j.at("boundary_term").get_to(d.boundary_term);
}

void to_json(json& j, const InequalityReport& r) {
  j = {{"mu2_diam2", r.mu2_diam2},
       {"kroger_margin", r.kroger_margin},
       {"payne_weinberger_margin", r.payne_weinberger_margin},
       {"strong_kroger_holds", r.strong_kroger_holds},
       {"szego_weinberger_margin", r.szego_weinberger_margin},
       {"polya_margin", r.polya_margin},
       {"hot_spots_certified", r.hot_spots_certified}};
}
void from_json(const json& j, InequalityReport& r) {
  j.at("mu2_diam2").get_to(r.mu2_diam2);
  j.at("kroger_margin").get_to(r.kroger_margin);
  j.at("payne_weinberger_margin").get_to(r.payne_weinberger_margin);
  j.at("strong_kroger_holds").get_to(r.strong_kroger_holds);
  j.at("szego_weinberger_margin").get_to(r.szego_weinberger_margin);
  j.at("polya_margin").get_to(r.polya_margin);
  j.at("hot_spots_certified").get_to(r.hot_spots_certified);
}

void to_json(json& j, const ComparisonDiagnostics& c) {
  j = {{"anchor_source", c.anchor_source},
       {"anchor_vertex", c.anchor_vertex},
       {"anchor", c.anchor},
       {"psi_at_anchor", c.psi_at_anchor},
       {"negated", c.negated},
       {"degenerate_anchor", c.degenerate_anchor},
       {"farthest_distance", c.farthest_distance},
       {"sqrt_mu2_times_farthest", c.sqrt_mu2_times_farthest},
       {"support_positivity", c.support_positivity},
       {"branch_radius", c.branch_radius},
       {"branch_count", c.branch_count ? json(*c.branch_count) : json(nullptr)},
       {"flux_min", c.flux_min},
       {"flux_max", c.flux_max},
       {"nodal_components", c.nodal_components},
       {"positive_components", c.positive_components},
       {"component_touches_boundary", c.component_touches_boundary},
       {"rayleigh_defects", c.rayleigh_defects},
       {"combined_quotient", c.combined_quotient ? json(*c.combined_quotient) : json(nullptr)},
       {"nodal_lines", c.nodal_lines}};
}
void from_json(const json& j, ComparisonDiagnostics& c) {
  j.at("anchor_source").get_to(c.anchor_source);
  j.at("anchor_vertex").get_to(c.anchor_vertex);
  j.at("anchor").get_to(c.anchor);
  j.at("psi_at_anchor").get_to(c.psi_at_anchor);
  j.at("negated").get_to(c.negated);
  j.at("degenerate_anchor").get_to(c.degenerate_anchor);
  j.at("farthest_distance").get_to(c.farthest_distance);
  j.at("sqrt_mu2_times_farthest").get_to(c.sqrt_mu2_times_farthest);
  j.at("support_positivity").get_to(c.support_positivity);
  j.at("branch_radius").get_to(c.branch_radius);
  if (!j.at("branch_count").is_null()) c.branch_count = j.at("branch_count").get<int>();
  j.at("flux_min").get_to(c.flux_min);
  j.at("flux_max").get_to(c.flux_max);
  j.at("nodal_components").get_to(c.nodal_components);
  j.at("positive_components").get_to(c.positive_components);
  j.at("component_touches_boundary").get_to(c.component_touches_boundary);
  j.at("rayleigh_defects").get_to(c.rayleigh_defects);
  if (!j.at("combined_quotient").is_null()) c.combined_quotient = j.at("combined_quotient").get<double>();
  j.at("nodal_lines").get_to(c.nodal_lines);
}

void to_json(json& j, const EigenvectorReport& e) {
  j = {{"label", e.label},
       {"interior_critical_points", e.interior_critical_points},
       {"boundary_extrema", e.boundary_extrema},
       {"verdict", e.verdict},
       {"nodal_components", e.nodal_components},
       {"all_components_touch_boundary", e.all_components_touch_boundary},
       {"steinerberger", e.steinerberger},
       {"comparisons", e.comparisons},
       {"nodal_lines", e.nodal_lines}};
}
void from_json(const json& j, EigenvectorReport& e) {
  j.at("label").get_to(e.label);
  j.at("interior_critical_points").get_to(e.interior_critical_points);
  j.at("boundary_extrema").get_to(e.boundary_extrema);
  j.at("verdict").get_to(e.verdict);
  j.at("nodal_components").get_to(e.nodal_components);
  j.at("all_components_touch_boundary").get_to(e.all_components_touch_boundary);
  j.at("steinerberger").get_to(e.steinerberger);
  j.at("comparisons").get_to(e.comparisons);
  j.at("nodal_lines").get_to(e.nodal_lines);
}

json to_json(const VerificationReport& r) {
  json j;
  j["schema"] = r.schema;
  j["domain"] = json::parse(spec_to_json(r.domain));
  const GeometrySummary& g = r.geometry;
  j["geometry"] = {{"polygon", g.polygon},
                   {"diameter", g.diameter},
                   {"diameter_endpoints", {g.diameter_endpoints.first, g.diameter_endpoints.second}},
                   {"inradius", g.inradius},
                   {"incenter", g.incenter},
                   {"area", g.area},
                   {"min_enclosing_circle", g.min_enclosing_circle},
                   {"exclusion_ratio", g.exclusion_ratio},
                   {"exclusion_threshold", g.exclusion_threshold},
                   {"exclusion_boundary", g.exclusion_boundary},
                   {"exclusion_on_domain_boundary", g.exclusion_on_domain_boundary}};
  const MeshQuality& q = r.mesh.quality;
  j["mesh"] = {{"h", r.mesh.h},
               {"refinements", r.mesh.refinements},
               {"min_angle", q.min_angle},
               {"h_min", q.h_min},
               {"h_max", q.h_max},
               {"vertex_count", q.vertex_count},
               {"triangle_count", q.triangle_count}};
  const SpectrumSummary& s = r.spectrum;
  j["spectrum"] = {{"neumann", s.neumann},
                   {"neumann_residuals", s.neumann_residuals},
                   {"lambda1", s.lambda1},
                   {"lambda1_residual", s.lambda1_residual},
                   {"relative_gap", s.relative_gap},
                   {"degenerate", s.degenerate},
                   {"neumann_iterations", s.neumann_iterations},
                   {"dirichlet_iterations", s.dirichlet_iterations}};
  j["inequalities"] = r.inequalities;
  j["planted_points"] = r.planted_points;
  j["eigenvectors"] = r.eigenvectors;
  j["verdict"] = r.verdict;
  j["warnings"] = r.warnings;
  if (!r.timings_ms.empty()) j["timings_ms"] = r.timings_ms;
  return j;
}

VerificationReport report_from_json(const json& j) {
  VerificationReport r;
  try {
    j.at("schema").get_to(r.schema);
    if (r.schema != kReportSchema) {
      throw Error(ErrorCode::SchemaVersionMismatch, "report schema " + std::to_string(r.schema));
    }
    r.domain = spec_from_json(j.at("domain").dump());
    const json& g = j.at("geometry");
    g.at("polygon").get_to(r.geometry.polygon);
    g.at("diameter").get_to(r.geometry.diameter);
    g.at("diameter_endpoints").at(0).get_to(r.geometry.diameter_endpoints.first);
    g.at("diameter_endpoints").at(1).get_to(r.geometry.diameter_endpoints.second);
    g.at("inradius").get_to(r.geometry.inradius);
    g.at("incenter").get_to(r.geometry.incenter);
    g.at("area").get_to(r.geometry.area);
    g.at("min_enclosing_circle").get_to(r.geometry.min_enclosing_circle);
    g.at("exclusion_ratio").get_to(r.geometry.exclusion_ratio);
    g.at("exclusion_threshold").get_to(r.geometry.exclusion_threshold);
    g.at("exclusion_boundary").get_to(r.geometry.exclusion_boundary);
    g.at("exclusion_on_domain_boundary").get_to(r.geometry.exclusion_on_domain_boundary);
    const json& m = j.at("mesh");
    m.at("h").get_to(r.mesh.h);
    m.at("refinements").get_to(r.mesh.refinements);
    m.at("min_angle").get_to(r.mesh.quality.min_angle);
    m.at("h_min").get_to(r.mesh.quality.h_min);
    m.at("h_max").get_to(r.mesh.quality.h_max);
    m.at("vertex_count").get_to(r.mesh.quality.vertex_count);
    m.at("triangle_count").get_to(r.mesh.quality.triangle_count);
    const json& s = j.at("spectrum");
    s.at("neumann").get_to(r.spectrum.neumann);
    s.at("neumann_residuals").get_to(r.spectrum.neumann_residuals);
    s.at("lambda1").get_to(r.spectrum.lambda1);
    s.at("lambda1_residual").get_to(r.spectrum.lambda1_residual);
    s.at("relative_gap").get_to(r.spectrum.relative_gap);
    s.at("degenerate").get_to(r.spectrum.degenerate);
    s.at("neumann_iterations").get_to(r.spectrum.neumann_iterations);
    s.at("dirichlet_iterations").get_to(r.spectrum.dirichlet_iterations);
    j.at("inequalities").get_to(r.inequalities);
    j.at("planted_points").get_to(r.planted_points);
    j.at("eigenvectors").get_to(r.eigenvectors);
    j.at("verdict").get_to(r.verdict);
    j.at("warnings").get_to(r.warnings);
    if (j.contains("timings_ms")) j.at("timings_ms").get_to(r.timings_ms);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
  }
  return r;
}

std::string dump_report(const VerificationReport& report) { return to_json(report).dump(1) + "\n"; }

// ------------------------------------------------------------ pipeline

namespace {

constexpr int kMaxAnchorsPerVector = 16;
constexpr double kDegenerateGap = 1e-6;
constexpr int kEigenspaceSamples = 8;

template <typename F>
auto stage(const char* name, std::map<std::string, double>& timings, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      timings[name] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    } else {
      auto out = body();
      timings[name] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      return out;
    }
  } catch (const Error& e) {
    throw Error(e.code(), std::string("stage ") + name + ": " + e.what());
  }
}

int nearest_interior_vertex(const TriMesh& mesh, Point p) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (!mesh.interior_mask[v]) continue;
    const double d = squared_distance(mesh.vertices[v], p);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(v);
    }
  }
  return best;
}

ComparisonDiagnostics compare_at(const TriMesh& mesh, const ConvexPolygon& poly, const SparseSym& k_mat,
                                 const SparseSym& m_mat, const std::vector<double>& psi, double mu2, int vertex,
                                 std::string source, bool keep_lines) {
  ComparisonDiagnostics d;
  d.anchor_source = std::move(source);
  const ComparisonField field = build_comparison(mesh, psi, mu2, mesh.vertices[static_cast<std::size_t>(vertex)]);
  d.anchor_vertex = field.anchor_vertex;
  d.anchor = field.anchor;
  d.psi_at_anchor = field.psi_at_anchor;
  d.negated = field.negated;
  d.degenerate_anchor = std::fabs(field.psi_at_anchor) <= 1e-12 * std::abs(*std::max_element(psi.begin(), psi.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }));
  d.farthest_distance = farthest_boundary_distance(poly, field.anchor);
  d.sqrt_mu2_times_farthest = std::sqrt(mu2) * d.farthest_distance;
  d.support_positivity = support_positivity(poly, field.anchor);
  d.branch_radius = 3.0 * mesh.h_max;
  try {
    d.branch_count = branch_count(mesh, field, d.branch_radius);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CircleOutsideDomain) throw;
  }
  const std::vector<double> flux = boundary_flux(field, mesh);
  d.flux_min = *std::min_element(flux.begin(), flux.end());
  d.flux_max = *std::max_element(flux.begin(), flux.end());
  const NodalDecomposition nodal = nodal_decomposition(mesh, field.values);
  d.nodal_components = static_cast<int>(nodal.components.size());
  d.positive_components = nodal.positive_component_count;
  std::vector<int> positive;
  for (std::size_t c = 0; c < nodal.components.size(); ++c) {
    d.component_touches_boundary.push_back(nodal.components[c].touches_boundary);
    if (nodal.components[c].sign > 0) positive.push_back(static_cast<int>(c));
  }
  for (int c : positive) d.rayleigh_defects.push_back(rayleigh_defect(mesh, k_mat, m_mat, field, nodal, c, flux));
  if (positive.size() >= 2) {
    d.combined_quotient = combined_quotient(k_mat, m_mat, field.values, nodal, positive[0], positive[1]);
  }
  if (keep_lines) d.nodal_lines = nodal.segments;
  return d;
}

}  // namespace

VerificationReport run_verify(const DomainSpec& spec, const VerifyOptions& opts) {
  if (opts.k < 3) throw Error(ErrorCode::InvalidArgument, "verify needs k >= 3");
  if (opts.refinements < 0) throw Error(ErrorCode::InvalidArgument, "refinements must be >= 0");
  VerificationReport r;
  std::map<std::string, double> timings;
  r.domain = spec;
  if (spec.polygonization_defaulted) {
    r.warnings.push_back("polygonization_n missing; defaulted to " + std::to_string(kDefaultPolygonization));
  }
  const auto& constants = bessel::constants();

  const ConvexPolygon poly = stage("realize", timings, [&] { return realize(spec); });

  stage("geometry", timings, [&] {
    GeometrySummary& g = r.geometry;
    g.polygon.assign(poly.vertices().begin(), poly.vertices().end());
    const Diameter d = diameter(poly);
    g.diameter = d.length;
    g.diameter_endpoints = d.endpoints;
    const Incircle in = inradius(poly);
    g.inradius = in.radius;
    g.incenter = in.center;
    g.area = poly.area();
    g.min_enclosing_circle = min_enclosing_circle(poly);
    g.exclusion_ratio = constants.c_excl;
    const ExclusionRegion region = exclusion_region(poly, constants.c_excl);
    g.exclusion_threshold = region.threshold;
    g.exclusion_boundary = region.boundary;
    g.exclusion_on_domain_boundary = region.on_domain_boundary;
  });

  const TriMesh mesh = stage("mesh", timings, [&] {
    TriMesh m = generate(poly, opts.h);
    for (int i = 0; i < opts.refinements; ++i) m = refine(m);
    return m;
  });
  r.mesh.h = opts.h;
  r.mesh.refinements = opts.refinements;
  r.mesh.quality = quality(mesh);

  const SparseSym k_mat = stage("assemble", timings, [&] { return assemble_stiffness(mesh); });
  const SparseSym m_mat = stage("assemble_mass", timings, [&] { return assemble_mass(mesh); });

  EigenOptions eo;
  eo.tol = opts.tol;
  eo.seed = opts.seed;
  const Spectrum neumann = stage("neumann", timings, [&] { return solve_neumann(k_mat, m_mat, opts.k, eo); });
  const Spectrum dirichlet = stage("dirichlet", timings, [&] { return solve_dirichlet(mesh, 1, eo); });

  SpectrumSummary& s = r.spectrum;
  s.neumann = neumann.eigenvalues;
  s.neumann_residuals = neumann.residuals;
  s.lambda1 = dirichlet.eigenvalues[0];
  s.lambda1_residual = dirichlet.residuals[0];
  s.relative_gap = (neumann.eigenvalues[2] - neumann.eigenvalues[1]) / neumann.eigenvalues[1];
  s.degenerate = s.relative_gap < kDegenerateGap;
  s.neumann_iterations = neumann.iterations;
  s.dirichlet_iterations = dirichlet.iterations;
  const double mu2 = neumann.eigenvalues[1];

  struct Candidate {
    std::string label;
    std::vector<double> values;
    double mu;
  };
  std::vector<Candidate> candidates;
  const auto column = [&](int c) {
    const Eigen::VectorXd v = neumann.vector(c);
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  candidates.push_back({"psi2", column(1), mu2});
  if (s.degenerate) {
    candidates.push_back({"psi3", column(2), neumann.eigenvalues[2]});
    XorShift rng(opts.seed ^ 0x5DEECE66DULL);
    const Eigen::VectorXd a = neumann.vector(1), b = neumann.vector(2);
    for (int i = 0; i < kEigenspaceSamples; ++i) {
      const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const Eigen::VectorXd v = std::cos(t) * a + std::sin(t) * b;
      candidates.push_back({"eigenspace_sample_" + std::to_string(i), std::vector<double>(v.data(), v.data() + v.size()), mu2});
    }
  }

  stage("analysis", timings, [&] {
    const int center_vertex = nearest_interior_vertex(mesh, r.geometry.min_enclosing_circle.center);
    for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
      const Candidate& cand = candidates[ci];
      EigenvectorReport e;
      e.label = cand.label;
      e.interior_critical_points = find_critical_points(mesh, cand.values);
      e.boundary_extrema = find_boundary_extrema(mesh, cand.values);
      e.verdict = theorem_check(e.interior_critical_points, poly, constants, mesh.h_max);
      const NodalDecomposition nodal = nodal_decomposition(mesh, cand.values);
      e.nodal_components = static_cast<int>(nodal.components.size());
      e.all_components_touch_boundary = !nodal.has_interior_domain();
      e.steinerberger = steinerberger_diagnostic(mesh, cand.values, poly);
      if (ci == 0) e.nodal_lines = nodal.segments;
      int anchors = 0;
      for (const CriticalPoint& cp : e.interior_critical_points) {
        if (anchors++ >= kMaxAnchorsPerVector) break;
        e.comparisons.push_back(compare_at(mesh, poly, k_mat, m_mat, cand.values, cand.mu, cp.vertex_id,
                                           "critical_point", ci == 0 && anchors == 1));
      }
      if (e.comparisons.empty() && center_vertex >= 0) {
        e.comparisons.push_back(compare_at(mesh, poly, k_mat, m_mat, cand.values, cand.mu, center_vertex,
                                           "diagnostic_only", ci == 0));
      }
      r.eigenvectors.push_back(std::move(e));
    }
    if (opts.planted) {
      const int v = nearest_interior_vertex(mesh, *opts.planted);
      if (v < 0) throw Error(ErrorCode::InvalidArgument, "planted point has no interior vertex nearby");
      CriticalPoint cp;
      cp.vertex_id = v;
      cp.location = mesh.vertices[static_cast<std::size_t>(v)];
      cp.value = candidates[0].values[static_cast<std::size_t>(v)];
      cp.kind = CriticalKind::max;
      cp.farthest_distance = farthest_boundary_distance(poly, cp.location);
      r.planted_points.push_back(cp);
      r.eigenvectors[0].comparisons.push_back(
          compare_at(mesh, poly, k_mat, m_mat, candidates[0].values, mu2, v, "planted", false));
    }
  });

  r.inequalities = inequality_checks(mu2, s.lambda1, poly, constants);

  std::vector<CriticalPoint> all = r.planted_points;
  for (const EigenvectorReport& e : r.eigenvectors) {
    all.insert(all.end(), e.interior_critical_points.begin(), e.interior_critical_points.end());
  }
  r.verdict = theorem_check(all, poly, constants, mesh.h_max);
  if (opts.timings) r.timings_ms = timings;
  return r;
}

VerificationReport run_verify(const std::filesystem::path& spec_path, const VerifyOptions& opts,
                              const std::filesystem::path& out_dir) {
  const DomainSpec spec = load_spec(spec_path);
  VerificationReport report = run_verify(spec, opts);
  std::filesystem::create_directories(out_dir);
  std::ofstream out(out_dir / "report.json");
  if (!out) throw Error(ErrorCode::Io, "cannot write " + (out_dir / "report.json").string());
  out << dump_report(report);
  if (opts.dump_mesh) {
    std::ofstream mesh_out(out_dir / "mesh.txt");
    write_mesh(rebuild_mesh(report), mesh_out);
  }
  return report;
}

TriMesh rebuild_mesh(const VerificationReport& report) {
  TriMesh m = generate(realize(report.domain), report.mesh.h);
  for (int i = 0; i < report.mesh.refinements; ++i) m = refine(m);
  return m;
}

// --------------------------------------------------------------- sweep

DomainSpec sweep_domain(std::uint64_t seed, int index) {
  XorShift rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(index) + 1);
  DomainSpec spec;
  spec.kind = DomainKind::random_convex;
  spec.seed = rng.next();
  spec.sides = 5 + static_cast<int>(rng.next() % 20);
  spec.diameter = 2.0;
  return spec;
}

SweepSummary run_sweep(int count, std::uint64_t seed, double h_rel, const VerifyOptions& base,
                       const std::filesystem::path& out_dir) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "sweep count must be >= 1");
  if (!(h_rel > 0.0 && h_rel < 0.25)) throw Error(ErrorCode::InvalidArgument, "h_rel must lie in (0, 0.25)");

  struct Outcome {
    DomainSpec spec;
    std::optional<VerificationReport> report;
    std::string error;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(count));

  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("HSV_THREADS")) {
    const int n = std::atoi(cap);
    if (n >= 1) threads = static_cast<unsigned>(n);
  }
  threads = std::min<unsigned>(threads, static_cast<unsigned>(count));

  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      Outcome& o = outcomes[static_cast<std::size_t>(i)];
      o.spec = sweep_domain(seed, i);
      try {
        VerifyOptions opts = base;
        opts.h = h_rel * diameter(realize(o.spec)).length;
        o.report = run_verify(o.spec, opts);
        if (!out_dir.empty()) {
          char name[32];
          std::snprintf(name, sizeof name, "domain_%03d", i);
          std::filesystem::create_directories(out_dir / name);
          std::ofstream out(out_dir / name / "report.json");
          out << dump_report(*o.report);
        }
      } catch (const std::exception& e) {
        o.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SweepSummary s;
  s.count = count;
  s.seed = seed;
  s.h_rel = h_rel;
  s.min_kroger_margin = s.min_payne_weinberger_margin = s.min_polya_margin = s.min_szego_weinberger_margin =
      std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    const Outcome& o = outcomes[static_cast<std::size_t>(i)];
    json entry = {{"index", i}, {"spec", json::parse(spec_to_json(o.spec))}};
    if (!o.report) {
      ++s.failure_count;
      entry["error"] = o.error;
      s.domains.push_back(entry);
      continue;
    }
    const VerificationReport& r = *o.report;
    const InequalityReport& q = r.inequalities;
    if (r.verdict.pass) ++s.pass_count;
    s.violation_count += static_cast<int>(r.verdict.violations.size());
    if (q.strong_kroger_holds) ++s.strong_kroger_count;
    s.min_kroger_margin = std::min(s.min_kroger_margin, q.kroger_margin);
    s.min_payne_weinberger_margin = std::min(s.min_payne_weinberger_margin, q.payne_weinberger_margin);
    s.min_polya_margin = std::min(s.min_polya_margin, q.polya_margin);
    s.min_szego_weinberger_margin = std::min(s.min_szego_weinberger_margin, q.szego_weinberger_margin);
    entry["pass"] = r.verdict.pass;
    entry["violations"] = r.verdict.violations.size();
    entry["mu2"] = r.spectrum.neumann[1];
    entry["mu2_diam2"] = q.mu2_diam2;
    entry["interior_critical_points"] = r.verdict.critical_points.size() - r.planted_points.size();
    s.domains.push_back(entry);
  }
  if (s.failure_count == count) {
    s.min_kroger_margin = s.min_payne_weinberger_margin = s.min_polya_margin = s.min_szego_weinberger_margin = 0.0;
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream out(out_dir / "summary.json");
    out << to_json(s).dump(1) << '\n';
  }
  return s;
}

json to_json(const SweepSummary& s) {
  return {{"count", s.count},
          {"seed", s.seed},
          {"h_rel", s.h_rel},
          {"pass_count", s.pass_count},
          {"violation_count", s.violation_count},
          {"failure_count", s.failure_count},
          {"strong_kroger_count", s.strong_kroger_count},
          {"min_margins",
           {{"kroger", s.min_kroger_margin},
            {"payne_weinberger", s.min_payne_weinberger_margin},
            {"polya", s.min_polya_margin},
            {"szego_weinberger", s.min_szego_weinberger_margin}}},
          {"domains", s.domains}};
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::SchemaVersionMismatch:
    case ErrorCode::Io:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidH:
    case ErrorCode::TooFewVertices:
    case ErrorCode::NotConvex:
    case ErrorCode::DegenerateArea:
    case ErrorCode::NonFiniteInput:
      return 1;
    default:
      return 2;
  }
}

}  // namespace hsv

// hsv: command-line front end for the critical-point exclusion toolkit.
//
//   hsv verify SPEC.json [--h 0.05] [--refine 0] [--k 4] [--tol 1e-8] [--seed 1]
//                        [--out DIR] [--svg FILE] [--show-nodal] [--show-mesh]
//                        [--timings] [--dump-mesh] [--plant X,Y]
//   hsv region SPEC.json [--out DIR]
//   hsv render REPORT.json --svg FILE [--show-nodal] [--show-mesh]
//   hsv sweep [--count 20] [--seed 1] [--h 0.02] [--out DIR]
//
// Exit codes: 0 success, 1 input error, 2 solver error, 3 theorem violation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hsv/bessel.hpp"
#include "hsv/error.hpp"
#include "hsv/report.hpp"

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hsv::Error(hsv::ErrorCode::Io, "cannot write " + path.string());
  out << text;
}

hsv::VerificationReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw hsv::Error(hsv::ErrorCode::Io, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw hsv::Error(hsv::ErrorCode::ParseError, e.what());
  }
  return hsv::report_from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for the critical-point exclusion region of second Neumann eigenfunctions"};
  app.require_subcommand(1);
  // -h would collide with the mesh-size option --h
  app.set_help_flag("--help", "print this help and exit");

  std::string spec_path, report_path, out_dir = ".", svg_path, plant;
  hsv::VerifyOptions vo;
  bool show_nodal = false, show_mesh = false;
  int count = 20;
  double h_rel = 0.02;

  auto* verify = app.add_subcommand("verify", "run the full pipeline on one domain");
  verify->add_option("spec", spec_path, "domain spec JSON")->required();
  verify->add_option("--h", vo.h, "target mesh size");
  verify->add_option("--refine", vo.refinements, "uniform refinements after meshing");
  verify->add_option("--k", vo.k, "number of Neumann eigenpairs (>= 3)");
  verify->add_option("--tol", vo.tol, "relative eigen-residual tolerance");
  verify->add_option("--seed", vo.seed, "seed for the starting block and eigenspace samples");
  verify->add_option("--out", out_dir, "output directory for report.json");
  verify->add_option("--svg", svg_path, "also render an SVG figure");
  verify->add_flag("--show-nodal", show_nodal, "draw nodal lines in the SVG");
  verify->add_flag("--show-mesh", show_mesh, "draw the mesh in the SVG");
  verify->add_flag("--timings", vo.timings, "record stage timings in the report");
  verify->add_flag("--dump-mesh", vo.dump_mesh, "write mesh.txt (HSV-MESH 1)");
  verify->add_option("--plant", plant, "negative control: plant a critical point at X,Y");

  auto* region = app.add_subcommand("region", "compute the exclusion region only");
  region->add_option("spec", spec_path, "domain spec JSON")->required();
  region->add_option("--out", out_dir, "output directory for region.json");

  auto* render = app.add_subcommand("render", "render a report as SVG");
  render->add_option("report", report_path, "report.json")->required();
  render->add_option("--svg", svg_path, "output SVG path")->required();
  render->add_flag("--show-nodal", show_nodal, "draw nodal lines");
  render->add_flag("--show-mesh", show_mesh, "draw the mesh");

  auto* sweep = app.add_subcommand("sweep", "verify a batch of seeded random convex domains");
  sweep->add_option("--count", count, "number of domains");
  sweep->add_option("--seed", vo.seed, "sweep seed");
  sweep->add_option("--h", h_rel, "mesh size relative to each domain's diameter");
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--k", vo.k, "number of Neumann eigenpairs (>= 3)");
  sweep->add_option("--tol", vo.tol, "relative eigen-residual tolerance");

  for (auto* sub : {verify, region, render, sweep}) sub->set_help_flag("--help", "print this help and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*verify) {
      if (!plant.empty()) {
        double x = 0.0, y = 0.0;
        if (std::sscanf(plant.c_str(), "%lf,%lf", &x, &y) != 2) {
          throw hsv::Error(hsv::ErrorCode::InvalidArgument, "--plant expects X,Y");
        }
        vo.planted = hsv::Point{x, y};
      }
      const hsv::VerificationReport report = hsv::run_verify(spec_path, vo, out_dir);
      if (!svg_path.empty()) {
        const hsv::TriMesh mesh = show_mesh ? hsv::rebuild_mesh(report) : hsv::TriMesh{};
        write_text(svg_path, hsv::render_svg(report, {show_nodal, show_mesh}, show_mesh ? &mesh : nullptr));
      }
      std::printf("mu2 = %.9g  lambda1 = %.9g  mu2*diam^2 = %.6g  strong_kroger = %s\n", report.spectrum.neumann[1],
                  report.spectrum.lambda1, report.inequalities.mu2_diam2,
                  report.inequalities.strong_kroger_holds ? "true" : "false");
      std::printf("interior critical points checked: %zu  violations: %zu  verdict: %s\n",
                  report.verdict.critical_points.size(), report.verdict.violations.size(),
                  report.verdict.pass ? "pass" : "VIOLATION");
      return report.verdict.pass ? 0 : 3;
    }
    if (*region) {
      const hsv::ConvexPolygon poly = hsv::realize(hsv::load_spec(spec_path));
      const hsv::ExclusionRegion r = hsv::exclusion_region(poly, hsv::bessel::constants().c_excl);
      nlohmann::json j = {{"threshold", r.threshold}, {"tolerance", r.tolerance}, {"seed", {r.seed.x, r.seed.y}}};
      nlohmann::json pts = nlohmann::json::array();
      for (const hsv::Point& p : r.boundary) pts.push_back({p.x, p.y});
      j["boundary"] = pts;
      j["on_domain_boundary"] = r.on_domain_boundary;
      write_text(std::filesystem::path(out_dir) / "region.json", j.dump(1) + "\n");
      std::printf("threshold = %.9g  samples = %zu\n", r.threshold, r.boundary.size());
      return 0;
    }
    if (*render) {
      const hsv::VerificationReport report = read_report(report_path);
      const hsv::TriMesh mesh = show_mesh ? hsv::rebuild_mesh(report) : hsv::TriMesh{};
      write_text(svg_path, hsv::render_svg(report, {show_nodal, show_mesh}, show_mesh ? &mesh : nullptr));
      return 0;
    }
    if (*sweep) {
      const hsv::SweepSummary s = hsv::run_sweep(count, vo.seed, h_rel, vo, out_dir);
      std::printf("domains: %d  pass: %d  violations: %d  failures: %d  strong_kroger: %d\n", s.count, s.pass_count,
                  s.violation_count, s.failure_count, s.strong_kroger_count);
      if (s.violation_count > 0) {
        std::fprintf(stderr, "theorem violations detected; see %s/summary.json\n", out_dir.c_str());
        return 3;
      }
      return s.failure_count > 0 ? 2 : 0;
    }
  } catch (const hsv::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return hsv::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}

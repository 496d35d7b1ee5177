#include <algorithm>
#include <cstdio>
#include <set>
#include <string>

#include "hsv/report.hpp"

namespace hsv {
namespace {

class SvgWriter {
 public:
  SvgWriter(double xmin, double ymax, double scale) : xmin_(xmin), ymax_(ymax), scale_(scale) {}

  // SVG y grows downward; flip so the figure keeps the domain's orientation.
  std::string xy(Point p) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f,%.6f", (p.x - xmin_) * scale_, (ymax_ - p.y) * scale_);
    return buf;
  }
  std::string num(double v) const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
  }
  std::string polygon(const std::vector<Point>& pts, const std::string& style) const {
    std::string s = "<polygon points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) s += ' ';
      s += xy(pts[i]);
    }
    return s + "\" " + style + "/>\n";
  }
  std::string line(Point a, Point b, const std::string& style) const {
    const std::string pa = xy(a), pb = xy(b);
    const auto comma_a = pa.find(','), comma_b = pb.find(',');
    return "<line x1=\"" + pa.substr(0, comma_a) + "\" y1=\"" + pa.substr(comma_a + 1) + "\" x2=\"" +
           pb.substr(0, comma_b) + "\" y2=\"" + pb.substr(comma_b + 1) + "\" " + style + "/>\n";
  }
  std::string dot(Point p, double radius, const char* fill) const {
    const std::string pc = xy(p);
    const auto comma = pc.find(',');
    return "<circle cx=\"" + pc.substr(0, comma) + "\" cy=\"" + pc.substr(comma + 1) + "\" r=\"" + num(radius) +
           "\" fill=\"" + fill + "\"/>\n";
  }

 private:
  double xmin_, ymax_, scale_;
};

}  // namespace

std::string render_svg(const VerificationReport& report, const RenderOptions& opts, const TriMesh* mesh) {
  const auto& poly = report.geometry.polygon;
  double xmin = poly[0].x, xmax = xmin, ymin = poly[0].y, ymax = ymin;
  for (const Point& p : poly) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double margin = 0.05 * std::max(xmax - xmin, ymax - ymin);
  xmin -= margin;
  xmax += margin;
  ymin -= margin;
  ymax += margin;
  // 800 user units across the larger extent.
  const double scale = 800.0 / std::max(xmax - xmin, ymax - ymin);
  const SvgWriter w(xmin, ymax, scale);
  const double width = (xmax - xmin) * scale, height = (ymax - ymin) * scale;

  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + w.num(width) + " " + w.num(height) +
       "\" width=\"" + w.num(width) + "\" height=\"" + w.num(height) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + w.num(width) + "\" height=\"" + w.num(height) + "\" fill=\"white\"/>\n";
  // Gray marks where critical points are allowed; the exclusion region is
  // painted white on top of it.
  s += w.polygon(poly, "fill=\"#b0b0b0\" stroke=\"none\"");
  s += w.polygon(report.geometry.exclusion_boundary, "fill=\"white\" stroke=\"none\"");

  if (opts.show_mesh && mesh) {
    s += "<g stroke=\"#808080\" stroke-width=\"0.3\" fill=\"none\">\n";
    for (const auto& t : mesh->triangles) {
      for (int i = 0; i < 3; ++i) {
        if (t[i] < t[(i + 1) % 3]) s += w.line(mesh->vertices[t[i]], mesh->vertices[t[(i + 1) % 3]], "");
      }
    }
    s += "</g>\n";
  }
  if (opts.show_nodal && !report.eigenvectors.empty()) {
    const EigenvectorReport& e = report.eigenvectors.front();
    s += "<g stroke=\"#1f4fa0\" stroke-width=\"1.5\" fill=\"none\">\n";
    for (const NodalSegment& seg : e.nodal_lines) s += w.line(seg.a, seg.b, "");
    s += "</g>\n";
    for (const ComparisonDiagnostics& c : e.comparisons) {
      if (c.nodal_lines.empty()) continue;
      s += "<g stroke=\"#2a8a2a\" stroke-width=\"1\" stroke-dasharray=\"4 3\" fill=\"none\">\n";
      for (const NodalSegment& seg : c.nodal_lines) s += w.line(seg.a, seg.b, "");
      s += "</g>\n";
      break;
    }
  }
  s += w.polygon(poly, "fill=\"none\" stroke=\"black\" stroke-width=\"2\"");

  std::set<int> drawn;
  for (const EigenvectorReport& e : report.eigenvectors) {
    for (const CriticalPoint& cp : e.boundary_extrema) {
      if (drawn.insert(-1 - cp.vertex_id).second) s += w.dot(cp.location, 4.0, "#1f4fff");
    }
  }
  for (const EigenvectorReport& e : report.eigenvectors) {
    for (const CriticalPoint& cp : e.interior_critical_points) {
      if (drawn.insert(cp.vertex_id).second) s += w.dot(cp.location, 4.0, "red");
    }
  }
  for (const CriticalPoint& cp : report.planted_points) s += w.dot(cp.location, 5.0, "red");
  s += "</svg>\n";
  return s;
}

}  // namespace hsv

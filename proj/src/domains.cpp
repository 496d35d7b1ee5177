#include "hsv/domains.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hsv/error.hpp"
#include "json.hpp"

namespace hsv {
namespace {

using nlohmann::json;

bool is_curved(DomainKind kind) { return kind == DomainKind::disk || kind == DomainKind::ellipse; }

std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double min_interior_angle_deg(const std::vector<Point>& v) {
  double best = 180.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point a = v[(i + v.size() - 1) % v.size()] - v[i];
    const Point b = v[(i + 1) % v.size()] - v[i];
    best = std::min(best, std::atan2(std::fabs(cross(a, b)), dot(a, b)) * 180.0 / std::numbers::pi);
  }
  return best;
}

// Stratified angles (one vertex per sector), radial jitter in [0.8, 1],
// a random anisotropic stretch in [0.5, 1] and a random rotation. Draws
// with an interior angle below 45 degrees are rejected and redrawn from
// the same stream so the mesher's angle bound stays reachable.
std::vector<Point> random_convex_vertices(const DomainSpec& spec) {
  XorShift rng(spec.seed);
  const double radius = 0.5 * spec.diameter;
  const int n = spec.sides;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double stretch = rng.uniform(0.5, 1.0);
    const double rotation = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double cr = std::cos(rotation), sr = std::sin(rotation);
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double theta = 2.0 * std::numbers::pi * (i + 0.8 * rng.uniform()) / n;
      const double r = radius * rng.uniform(0.8, 1.0);
      const Point p{r * std::cos(theta), stretch * r * std::sin(theta)};
      pts.push_back({cr * p.x - sr * p.y, sr * p.x + cr * p.y});
    }
    std::vector<Point> hull = convex_hull(std::move(pts));
    if (hull.size() >= 3 && min_interior_angle_deg(hull) >= 45.0) return hull;
  }
  throw Error(ErrorCode::InternalInvariantViolation, "random_convex generator exhausted its attempts");
}

DomainKind kind_from_string(const std::string& s) {
  if (s == "disk") return DomainKind::disk;
  if (s == "ellipse") return DomainKind::ellipse;
  if (s == "rectangle") return DomainKind::rectangle;
  if (s == "regular_polygon") return DomainKind::regular_polygon;
  if (s == "random_convex") return DomainKind::random_convex;
  if (s == "explicit") return DomainKind::explicit_vertices;
  throw Error(ErrorCode::ParseError, "field \"kind\": unknown domain kind \"" + s + "\"");
}

template <typename T>
T field(const json& j, const char* name) {
  if (!j.contains(name)) throw Error(ErrorCode::ParseError, std::string("missing field \"") + name + "\"");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("field \"") + name + "\": " + e.what());
  }
}

}  // namespace

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::disk: return "disk";
    case DomainKind::ellipse: return "ellipse";
    case DomainKind::rectangle: return "rectangle";
    case DomainKind::regular_polygon: return "regular_polygon";
    case DomainKind::random_convex: return "random_convex";
    case DomainKind::explicit_vertices: return "explicit";
  }
  return "unknown";
}

void check_spec(const DomainSpec& spec) {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be positive and finite");
    }
  };
  switch (spec.kind) {
    case DomainKind::disk: positive(spec.radius, "radius"); break;
    case DomainKind::ellipse:
      positive(spec.a, "a");
      positive(spec.b, "b");
      if (spec.a < spec.b) throw Error(ErrorCode::InvalidArgument, "ellipse needs a >= b");
      break;
    case DomainKind::rectangle:
      positive(spec.length, "length");
      positive(spec.width, "width");
      if (spec.length < spec.width) throw Error(ErrorCode::InvalidArgument, "rectangle needs length >= width");
      break;
    case DomainKind::regular_polygon:
      positive(spec.circumradius, "circumradius");
      if (spec.sides < 3) throw Error(ErrorCode::InvalidArgument, "regular polygon needs >= 3 sides");
      break;
    case DomainKind::random_convex:
      positive(spec.diameter, "diameter");
      if (spec.sides < 3) throw Error(ErrorCode::InvalidArgument, "random polygon needs >= 3 vertices");
      break;
    case DomainKind::explicit_vertices:
      if (spec.vertices.size() < 3) throw Error(ErrorCode::TooFewVertices, "explicit domain needs >= 3 vertices");
      break;
  }
  if (is_curved(spec.kind) && spec.polygonization_n < 3) {
    throw Error(ErrorCode::InvalidArgument, "polygonization_n must be >= 3");
  }
}

ConvexPolygon realize(const DomainSpec& spec) {
  check_spec(spec);
  std::vector<Point> v;
  switch (spec.kind) {
    case DomainKind::disk:
    case DomainKind::ellipse: {
      const double ax = spec.kind == DomainKind::disk ? spec.radius : spec.a;
      const double by = spec.kind == DomainKind::disk ? spec.radius : spec.b;
      const int n = spec.polygonization_n;
      for (int i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * i / n;
        v.push_back({ax * std::cos(t), by * std::sin(t)});
      }
      break;
    }
    case DomainKind::rectangle:
      v = {{0.0, 0.0}, {spec.length, 0.0}, {spec.length, spec.width}, {0.0, spec.width}};
      break;
    case DomainKind::regular_polygon:
      for (int i = 0; i < spec.sides; ++i) {
        const double t = 2.0 * std::numbers::pi * i / spec.sides;
        v.push_back({spec.circumradius * std::cos(t), spec.circumradius * std::sin(t)});
      }
      break;
    case DomainKind::random_convex: v = random_convex_vertices(spec); break;
    case DomainKind::explicit_vertices: v = spec.vertices; break;
  }
  return validate(v);
}

std::string spec_to_json(const DomainSpec& spec) {
  json j;
  j["schema"] = kSpecSchema;
  j["kind"] = to_string(spec.kind);
  switch (spec.kind) {
    case DomainKind::disk: j["radius"] = spec.radius; break;
    case DomainKind::ellipse:
      j["a"] = spec.a;
      j["b"] = spec.b;
      break;
    case DomainKind::rectangle:
      j["length"] = spec.length;
      j["width"] = spec.width;
      break;
    case DomainKind::regular_polygon:
      j["sides"] = spec.sides;
      j["circumradius"] = spec.circumradius;
      break;
    case DomainKind::random_convex:
      j["seed"] = spec.seed;
      j["sides"] = spec.sides;
      j["diameter"] = spec.diameter;
      break;
    case DomainKind::explicit_vertices: {
      json arr = json::array();
      for (const Point& p : spec.vertices) arr.push_back({p.x, p.y});
      j["vertices"] = arr;
      break;
    }
  }
  j["polygonization_n"] = spec.polygonization_n;
  return j.dump(2);
}

DomainSpec spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "domain spec must be a JSON object");
  const int schema = field<int>(j, "schema");
  if (schema != kSpecSchema) {
    throw Error(ErrorCode::SchemaVersionMismatch,
                "field \"schema\": expected " + std::to_string(kSpecSchema) + ", got " + std::to_string(schema));
  }
  DomainSpec spec;
  spec.kind = kind_from_string(field<std::string>(j, "kind"));
  switch (spec.kind) {
    case DomainKind::disk: spec.radius = field<double>(j, "radius"); break;
    case DomainKind::ellipse:
      spec.a = field<double>(j, "a");
      spec.b = field<double>(j, "b");
      break;
    case DomainKind::rectangle:
      spec.length = field<double>(j, "length");
      spec.width = field<double>(j, "width");
      break;
    case DomainKind::regular_polygon:
      spec.sides = field<int>(j, "sides");
      spec.circumradius = field<double>(j, "circumradius");
      break;
    case DomainKind::random_convex:
      spec.seed = field<std::uint64_t>(j, "seed");
      spec.sides = field<int>(j, "sides");
      spec.diameter = j.contains("diameter") ? field<double>(j, "diameter") : 2.0;
      break;
    case DomainKind::explicit_vertices: {
      const auto raw = field<std::vector<std::vector<double>>>(j, "vertices");
      for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i].size() != 2) {
          throw Error(ErrorCode::ParseError, "field \"vertices\"[" + std::to_string(i) + "]: expected [x, y]");
        }
        spec.vertices.push_back({raw[i][0], raw[i][1]});
      }
      break;
    }
  }
  if (j.contains("polygonization_n")) {
    spec.polygonization_n = field<int>(j, "polygonization_n");
  } else {
    spec.polygonization_n = kDefaultPolygonization;
    spec.polygonization_defaulted = is_curved(spec.kind);
  }
  try {
    check_spec(spec);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return spec;
}

void save_spec(const DomainSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << spec_to_json(spec) << '\n';
}

DomainSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return spec_from_json(ss.str());
}

}  // namespace hsv

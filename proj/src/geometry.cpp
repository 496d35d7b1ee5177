#include "hsv/geometry.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include "hsv/error.hpp"

namespace hsv {

Point ConvexPolygon::edge_normal(std::size_t i) const {
  const Point e = vertex(i + 1) - vertex(i);
  const double len = norm(e);
  return {e.y / len, -e.x / len};
}

double ConvexPolygon::edge_clearance(std::size_t i, Point p) const {
  return dot(edge_normal(i), vertex(i) - p);
}

ConvexPolygon validate(std::span<const Point> raw) {
  if (raw.size() < 3) {
    throw Error(ErrorCode::TooFewVertices,
                "polygon needs at least 3 vertices, got " + std::to_string(raw.size()));
  }
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const Point& p : raw) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorCode::NonFiniteInput, "polygon vertex is not finite");
    }
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double scale = std::max(xmax - xmin, ymax - ymin);
  if (!(scale > 0.0)) throw Error(ErrorCode::DegenerateArea, "all vertices coincide");

  std::vector<Point> v(raw.begin(), raw.end());
  double twice_area = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) twice_area += cross(v[i], v[(i + 1) % v.size()]);
  if (std::fabs(0.5 * twice_area) <= 1e-12 * scale * scale) {
    throw Error(ErrorCode::DegenerateArea, "polygon area is zero to within 1e-12 scale^2");
  }
  if (twice_area < 0.0) std::reverse(v.begin(), v.end());

  const double dup_tol = 1e-9 * scale;
  const double turn_tol = 1e-12 * scale * scale;
  bool changed = true;
  while (changed && v.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < v.size() && v.size() >= 3; ++i) {
      const std::size_t n = v.size();
      const Point prev = v[(i + n - 1) % n];
      const Point cur = v[i];
      const Point next = v[(i + 1) % n];
      const bool duplicate = distance(cur, next) <= dup_tol;
      const double turn = cross(cur - prev, next - cur);
      const bool straight = std::fabs(turn) <= turn_tol && dot(cur - prev, next - cur) > 0.0;
      if (duplicate || straight) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(duplicate ? (i + 1) % n : i));
        changed = true;
        break;
      }
    }
  }
  if (v.size() < 3) throw Error(ErrorCode::DegenerateArea, "fewer than 3 vertices remain");

  double turning = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::size_t n = v.size();
    const Point a = v[i] - v[(i + n - 1) % n];
    const Point b = v[(i + 1) % n] - v[i];
    if (cross(a, b) < -turn_tol) {
      throw Error(ErrorCode::NotConvex, "reflex turn at vertex " + std::to_string(i));
    }
    turning += std::atan2(cross(a, b), dot(a, b));
  }
  if (std::fabs(turning - 2.0 * std::numbers::pi) > 1e-6) {
    throw Error(ErrorCode::NotConvex, "boundary winds more than once");
  }

  ConvexPolygon poly;
  double a2 = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point p = v[i];
    const Point q = v[(i + 1) % v.size()];
    const double c = cross(p, q);
    a2 += c;
    cx += (p.x + q.x) * c;
    cy += (p.y + q.y) * c;
  }
  poly.area_ = 0.5 * a2;
  poly.centroid_ = {cx / (3.0 * a2), cy / (3.0 * a2)};
  poly.scale_ = scale;
  poly.vertices_ = std::move(v);
  return poly;
}

Diameter diameter(const ConvexPolygon& poly) {
  const std::size_t n = poly.size();
  Diameter best;
  double best_d2 = -1.0;
  const auto consider = [&](std::size_t a, std::size_t b) {
    const double d2 = squared_distance(poly.vertex(a), poly.vertex(b));
    if (d2 > best_d2) {
      best_d2 = d2;
      best.endpoints = {poly.vertex(a), poly.vertex(b)};
    }
  };
  std::size_t j = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const Point edge = poly.vertex(i + 1) - poly.vertex(i);
    // Advance the opposite caliper while the next edge still turns forward.
    std::size_t guard = 0;
    while (cross(edge, poly.vertex(j + 1) - poly.vertex(j)) > 0.0 && guard++ < n) j = (j + 1) % n;
    consider(i, j);
    consider(i + 1, j);
    // Parallel opposite edges have four antipodal pairs.
    consider(i, j + 1);
    consider(i + 1, j + 1);
  }
  best.length = std::sqrt(best_d2);
  return best;
}

namespace {

// Dense tableau simplex for max c^T z s.t. A z <= b, z >= 0 with b >= 0,
// so the all-slack basis is feasible. Bland's rule prevents cycling.
std::vector<double> simplex_max(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                                const std::vector<double>& c) {
  const std::size_t m = a.size();
  const std::size_t nv = c.size();
  const std::size_t cols = nv + m + 1;
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < nv; ++j) t[i][j] = a[i][j];
    t[i][nv + i] = 1.0;
    t[i][cols - 1] = b[i];
    basis[i] = nv + i;
  }
  for (std::size_t j = 0; j < nv; ++j) t[m][j] = -c[j];

  constexpr double eps = 1e-13;
  for (std::size_t iter = 0; iter < 50 * (m + nv); ++iter) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      if (t[m][j] < -eps) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] > eps) best_ratio = std::min(best_ratio, t[i][cols - 1] / t[i][enter]);
    }
    std::size_t leave = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] > eps && t[i][cols - 1] / t[i][enter] <= best_ratio + eps &&
          (leave == m || basis[i] < basis[leave])) {
        leave = i;
      }
    }
    if (leave == m) throw Error(ErrorCode::InternalInvariantViolation, "inradius LP is unbounded");
    const double piv = t[leave][enter];
    for (double& x : t[leave]) x /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || t[i][enter] == 0.0) continue;
      const double f = t[i][enter];
      for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  std::vector<double> z(nv, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < nv) z[basis[i]] = t[i][cols - 1];
  }
  return z;
}

}  // namespace

Incircle inradius(const ConvexPolygon& poly) {
  // Unknowns (u+, u-, v+, v-, rho) >= 0 with center = centroid + (u+ - u-, v+ - v-).
  const Point g = poly.centroid();
  const std::size_t n = poly.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(5));
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point nrm = poly.edge_normal(i);
    a[i] = {nrm.x, -nrm.x, nrm.y, -nrm.y, 1.0};
    b[i] = std::max(0.0, poly.edge_clearance(i, g));
  }
  const std::vector<double> z = simplex_max(a, b, {0.0, 0.0, 0.0, 0.0, 1.0});
  Incircle result;
  result.center = {g.x + z[0] - z[1], g.y + z[2] - z[3]};
  // Report the clearance actually achieved by the returned center.
  double rho = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) rho = std::min(rho, poly.edge_clearance(i, result.center));
  result.radius = rho;
  return result;
}

double farthest_boundary_distance(const ConvexPolygon& poly, Point p) {
  double best = 0.0;
  for (const Point& v : poly.vertices()) best = std::max(best, squared_distance(p, v));
  return std::sqrt(best);
}

namespace {

Circle circle_from(Point a, Point b) {
  const Point c = 0.5 * (a + b);
  return {c, std::max(distance(c, a), distance(c, b))};
}

Circle circle_from(Point a, Point b, Point c) {
  const Point ab = b - a;
  const Point ac = c - a;
  const double d = 2.0 * cross(ab, ac);
  if (d == 0.0) {
    Circle best = circle_from(a, b);
    for (const Circle& cand : {circle_from(a, c), circle_from(b, c)}) {
      if (cand.radius > best.radius) best = cand;
    }
    return best;
  }
  const double ab2 = dot(ab, ab);
  const double ac2 = dot(ac, ac);
  const Point off{(ac.y * ab2 - ab.y * ac2) / d, (ab.x * ac2 - ac.x * ab2) / d};
  const Point center = a + off;
  return {center, std::max({distance(center, a), distance(center, b), distance(center, c)})};
}

}  // namespace

Circle min_enclosing_circle(const ConvexPolygon& poly) {
  std::vector<Point> pts(poly.vertices().begin(), poly.vertices().end());
  // Fixed xorshift shuffle keeps the expected linear running time and
  // makes the result reproducible.
  std::uint64_t state = 0x9E3779B97F4A7C15ULL;
  for (std::size_t i = pts.size(); i > 1; --i) {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    std::swap(pts[i - 1], pts[state % i]);
  }
  const double slack = 1e-12 * poly.scale();
  const auto inside = [slack](const Circle& c, Point p) { return distance(c.center, p) <= c.radius + slack; };

  Circle c{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (inside(c, pts[i])) continue;
    c = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (inside(c, pts[j])) continue;
      c = circle_from(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (!inside(c, pts[k])) c = circle_from(pts[i], pts[j], pts[k]);
      }
    }
  }
  return c;
}

bool contains(const ConvexPolygon& poly, Point p) {
  const double slack = 1e-12 * diameter(poly).length;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (poly.edge_clearance(i, p) < -slack) return false;
  }
  return true;
}

bool ExclusionRegion::contains(Point p) const {
  bool inside = false;
  const std::size_t n = boundary.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = boundary[i];
    const Point b = boundary[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

ExclusionRegion exclusion_region(const ConvexPolygon& poly, double ratio) {
  if (!(ratio > 0.5 && ratio < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "exclusion ratio must lie in (0.5, 1)");
  }
  const double diam = diameter(poly).length;
  ExclusionRegion region;
  region.threshold = ratio * diam;
  region.tolerance = 1e-6 * diam;
  region.seed = min_enclosing_circle(poly).center;
  if (!(farthest_boundary_distance(poly, region.seed) <= region.threshold) || !contains(poly, region.seed)) {
    throw Error(ErrorCode::InternalInvariantViolation,
                "min-enclosing-circle center is not a member of the exclusion region");
  }
  region.boundary.reserve(kRegionRays);
  region.on_domain_boundary.reserve(kRegionRays);
  for (int k = 0; k < kRegionRays; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / kRegionRays;
    const Point dir{std::cos(angle), std::sin(angle)};
    double t_exit = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Point nrm = poly.edge_normal(i);
      const double rate = dot(nrm, dir);
      if (rate > 0.0) t_exit = std::min(t_exit, poly.edge_clearance(i, region.seed) / rate);
    }
    const auto at = [&](double t) { return region.seed + t * dir; };
    if (farthest_boundary_distance(poly, at(t_exit)) <= region.threshold) {
      region.boundary.push_back(at(t_exit));
      region.on_domain_boundary.push_back(true);
      continue;
    }
    // F is convex along the ray, so {t : F <= threshold} is an interval
    // starting at 0 and bisection finds its far end.
    double lo = 0.0, hi = t_exit;
    while (hi - lo > region.tolerance) {
      const double mid = 0.5 * (lo + hi);
      if (farthest_boundary_distance(poly, at(mid)) <= region.threshold) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    region.boundary.push_back(at(lo));
    region.on_domain_boundary.push_back(false);
  }
  return region;
}

}  // namespace hsv

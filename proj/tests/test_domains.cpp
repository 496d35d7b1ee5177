#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "hsv/domains.hpp"
#include "hsv/error.hpp"

using hsv::DomainKind;
using hsv::DomainSpec;

namespace {

DomainSpec disk(int n, double r = 1.0) {
  DomainSpec s;
  s.kind = DomainKind::disk;
  s.radius = r;
  s.polygonization_n = n;
  return s;
}

std::vector<DomainSpec> samples() {
  std::vector<DomainSpec> out;
  out.push_back(disk(512));
  DomainSpec e;
  e.kind = DomainKind::ellipse;
  e.a = 2;
  e.b = 1;
  e.polygonization_n = 256;
  out.push_back(e);
  DomainSpec r;
  r.kind = DomainKind::rectangle;
  r.length = 2;
  r.width = 1;
  out.push_back(r);
  DomainSpec p;
  p.kind = DomainKind::regular_polygon;
  p.sides = 7;
  p.circumradius = 1.5;
  out.push_back(p);
  DomainSpec rc;
  rc.kind = DomainKind::random_convex;
  rc.seed = 7;
  rc.sides = 20;
  rc.diameter = 2;
  out.push_back(rc);
  DomainSpec x;
  x.kind = DomainKind::explicit_vertices;
  x.vertices = {{0, 0}, {1.25, 0}, {1, 0.75}, {0.1, 1}};
  out.push_back(x);
  return out;
}

}  // namespace

TEST_CASE("disk with four samples is a square") {
  const auto poly = hsv::realize(disk(4));
  REQUIRE(poly.size() == 4);
  CHECK(poly.area() == doctest::Approx(2.0));
  CHECK(poly.vertex(0).x == doctest::Approx(1.0));
  CHECK(std::abs(poly.vertex(1).x) < 1e-15);
  CHECK(poly.vertex(1).y == doctest::Approx(1.0));
}

TEST_CASE("ellipse diameter is slightly below the major axis") {
  DomainSpec e;
  e.kind = DomainKind::ellipse;
  e.a = 2;
  e.b = 1;
  e.polygonization_n = 256;
  const double eps = 4.0 - hsv::diameter(hsv::realize(e)).length;
  CHECK(eps >= 0.0);
  CHECK(eps <= 4.0 * std::pow(std::numbers::pi / 256, 2) / 2);
}

TEST_CASE("inscribed disk areas increase and converge") {
  double prev = 0.0;
  for (int n : {64, 128, 256, 512}) {
    const double area = hsv::realize(disk(n)).area();
    CHECK(area > prev);
    CHECK(std::numbers::pi - area >= 0.0);
    CHECK(std::numbers::pi - area <= std::numbers::pi * (2 * std::numbers::pi * std::numbers::pi / (3.0 * n * n)));
    prev = area;
  }
}

TEST_CASE("generated polygons keep every vertex") {
  for (const DomainSpec& s : samples()) {
    const auto poly = hsv::realize(s);
    std::size_t expected = 0;
    switch (s.kind) {
      case DomainKind::disk:
      case DomainKind::ellipse: expected = static_cast<std::size_t>(s.polygonization_n); break;
      case DomainKind::rectangle: expected = 4; break;
      case DomainKind::regular_polygon: expected = static_cast<std::size_t>(s.sides); break;
      case DomainKind::random_convex: expected = poly.size(); break;
      case DomainKind::explicit_vertices: expected = s.vertices.size(); break;
    }
    CHECK(poly.size() == expected);
  }
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    DomainSpec rc;
    rc.kind = DomainKind::random_convex;
    rc.seed = seed;
    rc.sides = 5 + static_cast<int>(seed % 20);
    rc.diameter = 2;
    // convex hull of jittered circle points: never more vertices than drawn,
    // never wider than the circle, and already clean for validate()
    const auto poly = hsv::realize(rc);
    CHECK(poly.size() <= static_cast<std::size_t>(rc.sides));
    CHECK(poly.size() >= 3);
    CHECK(hsv::diameter(poly).length <= 2.0);
    CHECK(hsv::diameter(poly).length >= 0.5 * 2.0 * 0.8);
    CHECK(hsv::validate(poly.vertices()).size() == poly.size());
  }
}

TEST_CASE("random convex polygons are deterministic") {
  DomainSpec rc;
  rc.kind = DomainKind::random_convex;
  rc.seed = 7;
  rc.sides = 20;
  const auto a = hsv::realize(rc), b = hsv::realize(rc);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.vertex(i) == b.vertex(i));
  rc.seed = 8;
  CHECK_FALSE(hsv::realize(rc).vertex(0) == a.vertex(0));
}

TEST_CASE("spec JSON round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "hsv_test_domains";
  std::filesystem::create_directories(dir);
  for (const DomainSpec& s : samples()) {
    CHECK(hsv::spec_from_json(hsv::spec_to_json(s)) == s);
    const auto path = dir / ("spec_" + hsv::to_string(s.kind) + ".json");
    hsv::save_spec(s, path);
    CHECK(hsv::load_spec(path) == s);
  }
}

TEST_CASE("spec parse errors") {
  CHECK_THROWS_WITH_AS(hsv::spec_from_json(R"({"schema":1,"kind":"pentagon"})"), doctest::Contains("kind"),
                       hsv::Error);
  try {
    hsv::spec_from_json(R"({"schema":1,"kind":"pentagon"})");
  } catch (const hsv::Error& e) {
    CHECK(e.code() == hsv::ErrorCode::ParseError);
  }
  try {
    hsv::spec_from_json(R"({"schema":2,"kind":"disk","radius":1})");
    FAIL("expected a schema error");
  } catch (const hsv::Error& e) {
    CHECK(e.code() == hsv::ErrorCode::SchemaVersionMismatch);
  }
  CHECK_THROWS_WITH_AS(hsv::spec_from_json(R"({"schema":1,"kind":"disk","radius":"big"})"),
                       doctest::Contains("radius"), hsv::Error);
  CHECK_THROWS_AS(hsv::spec_from_json("{not json"), hsv::Error);
  CHECK_THROWS_AS(hsv::spec_from_json(R"({"schema":1,"kind":"disk","radius":-1})"), hsv::Error);
}

TEST_CASE("missing polygonization defaults with a warning flag") {
  const DomainSpec s = hsv::spec_from_json(R"({"schema":1,"kind":"disk","radius":1})");
  CHECK(s.polygonization_n == 512);
  CHECK(s.polygonization_defaulted);
  const DomainSpec r = hsv::spec_from_json(R"({"schema":1,"kind":"rectangle","length":2,"width":1})");
  CHECK_FALSE(r.polygonization_defaulted);
}

TEST_CASE("xorshift is reproducible") {
  hsv::XorShift a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  hsv::XorShift c(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hsv/geometry.hpp"

namespace hsv {

enum class DomainKind { disk, ellipse, rectangle, regular_polygon, random_convex, explicit_vertices };

/// Parameters of a test domain. Only the fields relevant to `kind` are
/// meaningful:
///   disk            radius
///   ellipse         a >= b (semi-axes)
///   rectangle       length >= width
///   regular_polygon sides, circumradius
///   random_convex   seed, sides (vertex count), diameter
///   explicit        vertices
/// Curved kinds are sampled with polygonization_n boundary points.
struct DomainSpec {
  DomainKind kind = DomainKind::disk;
  double radius = 1.0;
  double a = 1.0;
  double b = 1.0;
  double length = 1.0;
  double width = 1.0;
  int sides = 6;
  double circumradius = 1.0;
  std::uint64_t seed = 1;
  double diameter = 2.0;
  std::vector<Point> vertices;
  int polygonization_n = 512;
  /// Set by load_spec when polygonization_n was absent for a curved kind.
  bool polygonization_defaulted = false;

  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

inline constexpr int kSpecSchema = 1;
inline constexpr int kDefaultPolygonization = 512;

std::string to_string(DomainKind kind);

/// Checks parameter positivity and sampling counts; throws InvalidArgument.
void check_spec(const DomainSpec& spec);

ConvexPolygon realize(const DomainSpec& spec);

/// JSON text for a spec ({"schema":1,"kind":...}).
std::string spec_to_json(const DomainSpec& spec);
/// Parses spec JSON; throws ParseError (naming the offending field) or
/// SchemaVersionMismatch.
DomainSpec spec_from_json(const std::string& text);

void save_spec(const DomainSpec& spec, const std::filesystem::path& path);
DomainSpec load_spec(const std::filesystem::path& path);

/// xorshift64* generator. Seeds reproduce on every platform.
class XorShift {
 public:
  explicit XorShift(std::uint64_t seed) : state_(seed ? seed : 0x2545F4914F6CDD1DULL) {}

  std::uint64_t next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
  }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace hsv

#pragma once

// Planar geometry kernel: vectors, poses, segments, and exact ray casting.
// Everything downstream (world, primitives, cycle analysis) builds on these
// few types, so the tolerances that define "contact" and "tie" live here.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>

namespace bounce {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Distance at which a moving body is considered to have reached a surface;
// motion stops this far short so the resulting pose stays strictly outside.
inline constexpr double kContactEps = 1e-9;

// Scale for degenerate-case decisions: parallelism rejection, nearest-hit
// ties, segment endpoint slack, and the strictly-positive-t floor.
inline constexpr double kTieEps = 1e-12;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend constexpr Vec2 operator*(Vec2 v, double s) { return {s * v.x, s * v.y}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// Maps any finite angle to [0, 2*pi).
inline double normalize_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;  // fmod can land exactly on 2*pi after the fold
  return r;
}

// Signed smallest rotation taking `from` to `to`, in (-pi, pi].
inline double angle_diff(double to, double from) {
  double d = normalize_angle(to - from);
  if (d > kPi) d -= kTwoPi;
  return d;
}

inline Vec2 heading_vec(double heading) { return {std::cos(heading), std::sin(heading)}; }

struct Pose {
  Vec2 p{};
  double heading = 0.0;  // radians, normalized to [0, 2*pi)

  Pose rotated(double du) const { return {p, normalize_angle(heading + du)}; }
  Pose advanced(double dist) const { return {p + dist * heading_vec(heading), heading}; }
};

struct Segment {
  Vec2 a{};
  Vec2 b{};

  Vec2 dir() const { return b - a; }
  double length() const { return norm(b - a); }
};

struct RayHit {
  double t = 0.0;   // distance along the ray (unit direction) to the hit
  Vec2 point{};     // origin + t * direction
};

// Casts the ray origin + t*heading_vec(heading), t > 0, against one segment.
// Returns the hit with the smallest positive t, or nullopt when the ray is
// parallel to the segment (collinear grazing included: a ray sliding along a
// boundary line does not collide with it) or misses it. Endpoints count as
// part of the segment within kTieEps slack.
inline std::optional<RayHit> ray_segment_intersection(Vec2 origin, double heading,
                                                      const Segment& seg) {
  const Vec2 r = heading_vec(heading);
  const Vec2 s = seg.dir();
  const double len = norm(s);
  if (len <= 0.0) return std::nullopt;
  const double denom = cross(r, s);
  if (std::abs(denom) / len < kTieEps) return std::nullopt;  // parallel
  const Vec2 ao = seg.a - origin;
  const double t = cross(ao, s) / denom;
  const double u = cross(ao, r) / denom;
  if (t <= kTieEps) return std::nullopt;                       // behind / at origin
  const double along = u * len;
  if (along < -kTieEps || along > len + kTieEps) return std::nullopt;
  return RayHit{t, origin + t * r};
}

// Deterministic 64-bit generator (splitmix64). Used for every seeded draw in
// the project so results are bit-identical across platforms; the standard
// distributions are implementation-defined and unsuitable for that.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
};

}  // namespace bounce

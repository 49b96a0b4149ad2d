#pragma once

// The corridor world: a rectangular corridor holding one axis-aligned cart
// (the pushable object) with a colored face on each end. Worlds are immutable
// values; pushing the cart returns a new world. All queries are exact ray
// casts — there is no timestep anywhere.

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "bounce/errors.hpp"
#include "bounce/geometry.hpp"

namespace bounce {

// Enumeration order doubles as the deterministic tie-break order when a ray
// meets two surfaces at the same distance (corner hits).
enum class SurfaceId : int {
  TopWall = 0,
  BottomWall = 1,
  LeftEndCap = 2,
  RightEndCap = 3,
  BlueFace = 4,    // left face of the cart; pushing it drives the cart +x
  YellowFace = 5,  // right face of the cart; pushing it drives the cart -x
  CartTop = 6,
  CartBottom = 7,
};

inline constexpr int kSurfaceCount = 8;

inline const char* surface_name(SurfaceId s) {
  switch (s) {
    case SurfaceId::TopWall: return "TopWall";
    case SurfaceId::BottomWall: return "BottomWall";
    case SurfaceId::LeftEndCap: return "LeftEndCap";
    case SurfaceId::RightEndCap: return "RightEndCap";
    case SurfaceId::BlueFace: return "BlueFace";
    case SurfaceId::YellowFace: return "YellowFace";
    case SurfaceId::CartTop: return "CartTop";
    case SurfaceId::CartBottom: return "CartBottom";
  }
  return "?";
}

constexpr bool is_face(SurfaceId s) {
  return s == SurfaceId::BlueFace || s == SurfaceId::YellowFace;
}

struct WorldParams {
  double width = 1.0;             // corridor height (wall spacing); the length unit
  double length = 20.0;           // corridor extent along x
  double cart_half_length = 0.5;  // half extent of the cart along x
  double cart_height = 0.9;       // cart extent along y, centered in the corridor
  double epsilon = 0.01;          // cart displacement per push (0 allowed: immovable)
  double goal_x = 18.0;           // goal region: cart right edge at or beyond this x
  double max_range = 5.0;         // sensing horizon for range/color queries
  double cart_x = 10.0;           // initial cart center
};

struct Hit {
  double distance = 0.0;
  Vec2 point{};
  SurfaceId surface{};
};

class World {
 public:
  explicit World(const WorldParams& params) : World(params, params.cart_x) {}

  World(const WorldParams& params, double cart_x) : params_(params), cart_x_(cart_x) {
    validate();
    build_segments();
  }

  const WorldParams& params() const { return params_; }
  double cart_x() const { return cart_x_; }
  double gap() const { return (params_.width - params_.cart_height) / 2.0; }
  double cart_low_y() const { return gap(); }
  double cart_high_y() const { return gap() + params_.cart_height; }
  double blue_x() const { return cart_x_ - params_.cart_half_length; }
  double yellow_x() const { return cart_x_ + params_.cart_half_length; }

  const Segment& segment(SurfaceId s) const { return segments_[static_cast<int>(s)]; }
  const std::array<Segment, kSurfaceCount>& segments() const { return segments_; }

  // True when the point is in (closed) free space: inside the corridor's
  // closed rectangle and not strictly interior to the cart. Points exactly on
  // a boundary count as free, so flush contact poses remain valid.
  bool in_free_space(Vec2 p) const {
    const double e = kTieEps;
    if (p.x < -e || p.x > params_.length + e) return false;
    if (p.y < -e || p.y > params_.width + e) return false;
    const bool inside_cart = p.x > blue_x() + e && p.x < yellow_x() - e &&
                             p.y > cart_low_y() + e && p.y < cart_high_y() - e;
    return !inside_cart;
  }

  void require_free(Vec2 p, const char* who) const {
    if (!in_free_space(p)) {
      throw InvalidPose(std::string(who) + ": point (" + std::to_string(p.x) + ", " +
                        std::to_string(p.y) + ") is outside free space");
    }
  }

  // Nearest surface hit along the pose's heading. Ties within kTieEps are
  // broken by enumeration order. From a valid interior pose the corridor is
  // closed, so a miss can only happen when grazing parallel along a boundary
  // straight out of a degenerate configuration; callers treat it as "no
  // surface".
  std::optional<Hit> ray_cast(const Pose& pose) const {
    require_free(pose.p, "ray_cast");
    std::optional<Hit> best;
    for (int i = 0; i < kSurfaceCount; ++i) {
      auto h = ray_segment_intersection(pose.p, pose.heading, segments_[i]);
      if (!h) continue;
      if (!best || h->t < best->distance - kTieEps) {
        best = Hit{h->t, h->point, static_cast<SurfaceId>(i)};
      }
    }
    return best;
  }

  // Range reading truncated at the sensing horizon: infinity when nothing is
  // hit within max_range.
  double range_reading(const Pose& pose, double max_range) const {
    auto h = ray_cast(pose);
    if (!h || h->distance > max_range) return kInf;
    return h->distance;
  }

  // First surface within the sensing horizon, if any.
  std::optional<SurfaceId> first_surface(const Pose& pose, double max_range) const {
    auto h = ray_cast(pose);
    if (!h || h->distance > max_range) return std::nullopt;
    return h->surface;
  }

  struct MoveResult {
    Pose end{};
    double traveled = 0.0;
    std::optional<SurfaceId> contact;  // set when motion ended on a surface
  };

  // Advances the pose along its heading by at most max_travel, stopping
  // kContactEps short of the first surface in the way. A pose already within
  // kContactEps of the obstructing surface reports contact with zero travel.
  MoveResult move_until_contact(const Pose& pose, double max_travel) const {
    if (max_travel < 0.0) max_travel = 0.0;
    auto h = ray_cast(pose);
    if (!h) return {pose.advanced(max_travel), max_travel, std::nullopt};
    const double stop = h->distance - kContactEps;
    if (stop <= 0.0) return {pose, 0.0, h->surface};
    if (max_travel >= stop) return {pose.advanced(stop), stop, h->surface};
    return {pose.advanced(max_travel), max_travel, std::nullopt};
  }

  // Pushed cart displacement toward +x for the blue (left) face, -x for the
  // yellow (right) face, clamped so the cart stays inside the corridor.
  // `amount` defaults to the world's epsilon.
  World pushed(SurfaceId face, std::optional<double> amount = std::nullopt) const {
    if (!is_face(face)) {
      throw NotPushable(std::string("surface ") + surface_name(face) + " is not a cart face");
    }
    const double a = amount.value_or(params_.epsilon);
    const double dir = (face == SurfaceId::BlueFace) ? 1.0 : -1.0;
    double nx = cart_x_ + dir * a;
    const double lo = params_.cart_half_length;
    const double hi = params_.length - params_.cart_half_length;
    if (nx < lo) nx = lo;
    if (nx > hi) nx = hi;
    return World(params_, nx);
  }

  // Goal predicate: the cart's right edge has reached the goal line.
  bool in_goal() const { return cart_x_ + params_.cart_half_length >= params_.goal_x; }

 private:
  void validate() const {
    if (!(params_.width > 0.0)) throw InvalidPose("world width must be positive");
    if (!(params_.length > 0.0)) throw InvalidPose("world length must be positive");
    if (!(params_.cart_half_length > 0.0)) throw InvalidPose("cart_half_length must be positive");
    if (!(params_.cart_height > 0.0) || params_.cart_height > params_.width) {
      throw InvalidPose("cart_height must lie in (0, width]");
    }
    if (params_.epsilon < 0.0) throw InvalidPose("epsilon must be non-negative");
    if (!(params_.max_range > 0.0)) throw InvalidPose("max_range must be positive");
    if (cart_x_ < params_.cart_half_length - kTieEps ||
        cart_x_ > params_.length - params_.cart_half_length + kTieEps) {
      throw InvalidPose("cart extends beyond the corridor");
    }
  }

  void build_segments() {
    const double L = params_.length;
    const double W = params_.width;
    const double y0 = cart_low_y();
    const double y1 = cart_high_y();
    const double xb = blue_x();
    const double xy = yellow_x();
    segments_[static_cast<int>(SurfaceId::TopWall)] = {{0, W}, {L, W}};
    segments_[static_cast<int>(SurfaceId::BottomWall)] = {{0, 0}, {L, 0}};
    segments_[static_cast<int>(SurfaceId::LeftEndCap)] = {{0, 0}, {0, W}};
    segments_[static_cast<int>(SurfaceId::RightEndCap)] = {{L, 0}, {L, W}};
    segments_[static_cast<int>(SurfaceId::BlueFace)] = {{xb, y0}, {xb, y1}};
    segments_[static_cast<int>(SurfaceId::YellowFace)] = {{xy, y0}, {xy, y1}};
    segments_[static_cast<int>(SurfaceId::CartTop)] = {{xb, y1}, {xy, y1}};
    segments_[static_cast<int>(SurfaceId::CartBottom)] = {{xb, y0}, {xy, y0}};
  }

  WorldParams params_;
  double cart_x_;
  std::array<Segment, kSurfaceCount> segments_{};
};

}  // namespace bounce

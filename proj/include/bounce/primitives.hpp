#pragma once

// Motion and sensing primitives. Each call advances the simulation by exactly
// one stage: it mutates the state, appends one event to the history, and
// updates the incremental progress count. A robot is a set of permitted
// primitives; invoking anything outside the set throws PrimitiveUnavailable.

#include <cmath>
#include <stdexcept>
#include <string>

#include "bounce/errors.hpp"
#include "bounce/geometry.hpp"
#include "bounce/history.hpp"
#include "bounce/world.hpp"

namespace bounce {

enum class Primitive : int {
  Rotate = 0,
  BoundedMove,
  MoveToContact,
  RangeSense,
  BlueSense,
  YellowSense,
  Omni,
};

inline const char* primitive_name(Primitive p) {
  switch (p) {
    case Primitive::Rotate: return "rotate";
    case Primitive::BoundedMove: return "bounded_move";
    case Primitive::MoveToContact: return "move_to_contact";
    case Primitive::RangeSense: return "range_sense";
    case Primitive::BlueSense: return "blue_sense";
    case Primitive::YellowSense: return "yellow_sense";
    case Primitive::Omni: return "omni";
  }
  return "?";
}

// A robot design: its name and the primitives it can execute.
struct RobotSpec {
  std::string name = "custom";
  bool allowed[7] = {false, false, false, false, false, false, false};

  bool has(Primitive p) const { return allowed[static_cast<int>(p)]; }

  RobotSpec& add(Primitive p) {
    allowed[static_cast<int>(p)] = true;
    return *this;
  }

  // The omniscient design: a single do-everything primitive.
  static RobotSpec r0() {
    RobotSpec s{"r0"};
    return s.add(Primitive::Omni);
  }
  // Full sensing and motion set.
  static RobotSpec r1() {
    RobotSpec s{"r1"};
    return s.add(Primitive::Rotate)
        .add(Primitive::BoundedMove)
        .add(Primitive::MoveToContact)
        .add(Primitive::RangeSense)
        .add(Primitive::BlueSense)
        .add(Primitive::YellowSense);
  }
  // Drops bounded translation and the yellow probe.
  static RobotSpec r2() {
    RobotSpec s{"r2"};
    return s.add(Primitive::Rotate)
        .add(Primitive::MoveToContact)
        .add(Primitive::RangeSense)
        .add(Primitive::BlueSense);
  }
  // Minimal: rotate, contact move, blue probe.
  static RobotSpec r3() {
    RobotSpec s{"r3"};
    return s.add(Primitive::Rotate).add(Primitive::MoveToContact).add(Primitive::BlueSense);
  }
};

// Full simulation state threaded through every primitive call.
struct SimState {
  World world;
  Pose robot{};
  RobotSpec spec;
  History history;
  CountTracker tracker;

  SimState(World w, Pose start, RobotSpec rs, InitialCondition init = UnknownStart{})
      : world(std::move(w)), robot(start), spec(std::move(rs)) {
    world.require_free(robot.p, "start pose");
    history.initial = std::move(init);
  }

  std::uint64_t stage() const { return history.stages(); }
  std::uint64_t count() const { return tracker.count(); }
};

namespace detail {

inline void require(const SimState& s, Primitive p) {
  if (!s.spec.has(p)) {
    throw PrimitiveUnavailable(std::string("robot '") + s.spec.name + "' cannot execute " +
                               primitive_name(p));
  }
}

inline void commit(SimState& s, Event e) {
  e.pose_after = s.robot;
  e.cart_after = s.world.cart_x();
  s.tracker.on_event(e);
  s.history.events.push_back(e);
}

// Shared motion core for the bounded and to-contact translation primitives:
// advance up to `bound`, stop a contact standoff short of the first obstacle,
// push if that obstacle is a cart face.
inline void translate(SimState& s, EventKind kind, double bound) {
  auto r = s.world.move_until_contact(s.robot, bound);
  s.world.require_free(r.end.p, "translate");
  Event e;
  e.kind = kind;
  e.u = bound;
  e.contact = r.contact;
  s.robot = r.end;
  if (r.contact && is_face(*r.contact)) {
    const double before = s.world.cart_x();
    s.world = s.world.pushed(*r.contact);
    e.pushed = true;
    e.push_dx = s.world.cart_x() - before;
  }
  commit(s, e);
}

}  // namespace detail

// Relative rotation by u (any real; a full turn is a legal no-op stage).
inline void exec_rotate(SimState& s, double u) {
  detail::require(s, Primitive::Rotate);
  s.robot = s.robot.rotated(u);
  Event e;
  e.kind = EventKind::Rotate;
  e.u = u;
  detail::commit(s, e);
}

// Forward translation bounded by u >= 0; stops at obstacles; pushes faces.
inline void exec_bounded_move(SimState& s, double u) {
  detail::require(s, Primitive::BoundedMove);
  if (u < 0.0) throw std::invalid_argument("bounded_move: negative bound");
  detail::translate(s, EventKind::BoundedMove, u);
}

// Forward translation until contact; the bound is the corridor diagonal, so
// from any interior pose the move terminates on a surface.
inline void exec_move_to_contact(SimState& s) {
  detail::require(s, Primitive::MoveToContact);
  const auto& p = s.world.params();
  detail::translate(s, EventKind::MoveToContact, std::hypot(p.length, p.width));
}

// Distance to the first surface along the heading; +infinity past max_range.
inline double sense_range(SimState& s) {
  detail::require(s, Primitive::RangeSense);
  Event e;
  e.kind = EventKind::RangeSense;
  e.reading = s.world.range_reading(s.robot, s.world.params().max_range);
  detail::commit(s, e);
  return e.reading;
}

// 1 iff the first surface within max_range is the probed cart face.
inline int sense_color(SimState& s, bool blue) {
  detail::require(s, blue ? Primitive::BlueSense : Primitive::YellowSense);
  Event e;
  e.kind = EventKind::ColorSense;
  e.probed_blue = blue;
  auto surf = s.world.first_surface(s.robot, s.world.params().max_range);
  const SurfaceId want = blue ? SurfaceId::BlueFace : SurfaceId::YellowFace;
  e.bit = (surf && *surf == want) ? 1 : 0;
  detail::commit(s, e);
  return e.bit;
}

inline int sense_blue(SimState& s) { return sense_color(s, true); }
inline int sense_yellow(SimState& s) { return sense_color(s, false); }

namespace detail {

// Surfaces the point currently rests against (within the contact standoff).
// Returns a bitmask indexed by SurfaceId.
inline unsigned flush_mask(const World& w, Vec2 p) {
  unsigned mask = 0;
  for (int i = 0; i < kSurfaceCount; ++i) {
    const Segment& seg = w.segment(static_cast<SurfaceId>(i));
    const Vec2 d = seg.dir();
    const double len2 = dot(d, d);
    if (len2 <= 0.0) continue;
    double t = dot(p - seg.a, d) / len2;
    if (t < 0.0) t = 0.0;
    if (t > 1.0) t = 1.0;
    const Vec2 q = seg.a + t * d;
    if (norm(p - q) <= kContactEps) mask |= (1u << i);
  }
  return mask;
}

inline bool moving_into(SurfaceId s, Vec2 dir) {
  switch (s) {
    case SurfaceId::TopWall: return dir.y > kTieEps;
    case SurfaceId::BottomWall: return dir.y < -kTieEps;
    case SurfaceId::LeftEndCap: return dir.x < -kTieEps;
    case SurfaceId::RightEndCap: return dir.x > kTieEps;
    case SurfaceId::BlueFace: return dir.x > kTieEps;    // approachable from the left only
    case SurfaceId::YellowFace: return dir.x < -kTieEps; // approachable from the right only
    case SurfaceId::CartTop: return dir.y < -kTieEps;    // robot above
    case SurfaceId::CartBottom: return dir.y > kTieEps;  // robot below
  }
  return false;
}

}  // namespace detail

// Omniscient actuation: rotate by vtheta and displace by (vx, vy) over one
// unit of time. Unlike the contact-move primitives the body rests flush on
// whatever it runs into (no standoff): a displacement into a wall truncates
// at the boundary, a displacement into a cart face pushes the cart by the
// horizontal penetration with the body following flush, and motion parallel
// to a boundary slides along it freely.
inline void exec_omni_move(SimState& s, double vx, double vy, double vtheta) {
  detail::require(s, Primitive::Omni);
  s.robot = s.robot.rotated(vtheta);
  Event e;
  e.kind = EventKind::OmniMove;
  e.u = vtheta;
  e.displacement = {vx, vy};

  const double dist = std::hypot(vx, vy);
  if (dist > 0.0) {
    const Vec2 dir{vx / dist, vy / dist};
    const unsigned flush = detail::flush_mask(s.world, s.robot.p);
    // A flush face pressed horizontally is a push, and takes priority over any
    // other contact sharing the corner.
    std::optional<SurfaceId> block;
    for (SurfaceId f : {SurfaceId::BlueFace, SurfaceId::YellowFace}) {
      if ((flush & (1u << static_cast<int>(f))) && detail::moving_into(f, dir)) {
        block = f;
      }
    }
    if (!block) {
      // Flush on some other surface and pressing into it blocks the move
      // entirely — unless the contact is at a corner and the motion actually
      // escapes into free space (e.g. sliding up a face past a cart lid's
      // endpoint), which a probe point just off the start position detects.
      const Vec2 probe = s.robot.p + 1e-8 * dir;
      if (!s.world.in_free_space(probe)) {
        for (int i = 0; i < kSurfaceCount && !block; ++i) {
          if ((flush & (1u << i)) && detail::moving_into(static_cast<SurfaceId>(i), dir)) {
            block = static_cast<SurfaceId>(i);
          }
        }
      }
    }
    if (block && is_face(*block)) {
      // Already flush on a face and pressing into it: the whole horizontal
      // component becomes a push, and the body follows the face.
      const double amount = dist * std::abs(dir.x);
      const double before = s.world.cart_x();
      s.world = s.world.pushed(*block, amount);
      const double moved = s.world.cart_x() - before;
      e.pushed = moved > 0.0;
      e.push_dx = moved;
      e.contact = block;
      const double face_x =
          (*block == SurfaceId::BlueFace) ? s.world.blue_x() : s.world.yellow_x();
      s.robot.p.x = face_x;
    } else if (block) {
      // Flush against a wall or cap and pressing into it: no motion.
      e.contact = block;
    } else {
      const double h = std::atan2(dir.y, dir.x);
      auto hit = [&]() -> std::optional<Hit> {
        // Cast along the displacement direction regardless of body heading.
        Pose probe{s.robot.p, h};
        return s.world.ray_cast(probe);
      }();
      if (hit && hit->distance <= dist + kContactEps) {
        s.robot.p = hit->point;  // flush, no standoff
        e.contact = hit->surface;
        if (is_face(hit->surface) && detail::moving_into(hit->surface, dir)) {
          // Penetration below the contact tolerance is rounding noise from the
          // distance subtraction, not a commanded push; treating it as one
          // would add a count increment with no matching cart displacement.
          const double amount = std::max(0.0, dist - hit->distance) * std::abs(dir.x);
          if (amount > kContactEps) {
            const double before = s.world.cart_x();
            s.world = s.world.pushed(hit->surface, amount);
            e.pushed = s.world.cart_x() > before;
            e.push_dx = s.world.cart_x() - before;
            const double face_x =
                (hit->surface == SurfaceId::BlueFace) ? s.world.blue_x() : s.world.yellow_x();
            s.robot.p.x = face_x;
          }
        }
      } else {
        s.robot.p = s.robot.p + dist * dir;
      }
    }
    s.world.require_free(s.robot.p, "omni_move");
  }
  detail::commit(s, e);
}

// Omniscient observation: the event records the exact robot pose and cart
// position (as every event does); this one exists purely to observe.
inline void exec_omni_sense(SimState& s) {
  detail::require(s, Primitive::Omni);
  Event e;
  e.kind = EventKind::OmniSense;
  detail::commit(s, e);
}

}  // namespace bounce

#pragma once

// Event history: the information available to a robot is exactly what its
// primitives returned, in order. Every primitive execution appends one event
// (one stage). The count tracker folds the history into the task's progress
// count incrementally; ispace.hpp holds the independent batch recount.

#include <cstdint>
#include <deque>
#include <optional>
#include <variant>
#include <vector>

#include "bounce/geometry.hpp"
#include "bounce/world.hpp"

namespace bounce {

enum class EventKind : int {
  Rotate = 0,        // relative rotation; observation: none
  BoundedMove,       // translate up to a bound, stop at obstacles, push faces
  MoveToContact,     // translate until contact (bound: corridor diagonal)
  RangeSense,        // distance to first surface, infinity beyond horizon
  ColorSense,        // 1 iff first surface within horizon is the probed face
  OmniMove,          // omniscient actuation: rotate + displace, flush contact
  OmniSense,         // omniscient observation of robot and cart state
};

constexpr bool is_actuation(EventKind k) {
  return k == EventKind::Rotate || k == EventKind::BoundedMove ||
         k == EventKind::MoveToContact || k == EventKind::OmniMove;
}

inline const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::Rotate: return "rotate";
    case EventKind::BoundedMove: return "move";
    case EventKind::MoveToContact: return "contact";
    case EventKind::RangeSense: return "range";
    case EventKind::ColorSense: return "color";
    case EventKind::OmniMove: return "omni";
    case EventKind::OmniSense: return "look";
  }
  return "?";
}

struct Event {
  EventKind kind{};
  double u = 0.0;                     // rotation angle / translation bound / omni rotation
  Vec2 displacement{};                // omni commanded displacement
  std::optional<SurfaceId> contact;   // surface the motion ended against, if any
  bool pushed = false;                // a cart face was pushed during this event
  double push_dx = 0.0;               // signed cart displacement (+x rightward)
  double reading = 0.0;               // range observation (may be +infinity)
  int bit = 0;                        // color observation
  bool probed_blue = false;           // which face the color probe asked about
  Pose pose_after{};                  // robot pose once the event completed
  double cart_after = 0.0;            // cart center once the event completed
};

// What the robot knew about its own pose before stage 0.
struct ExactStart {
  Pose pose{};
};
struct StartSet {
  std::vector<Pose> poses;
};
struct UnknownStart {};
using InitialCondition = std::variant<ExactStart, StartSet, UnknownStart>;

struct History {
  InitialCondition initial = UnknownStart{};
  std::vector<Event> events;

  std::uint64_t stages() const { return events.size(); }
};

// ---------------------------------------------------------------------------
// Progress count.
//
// One unit of progress is a completed bounce period ending in a push on the
// blue face: a contact-move into the blue face qualifies iff the five
// actuations before it are [rotate(u), contact-move -> wall, rotate(u),
// contact-move -> other wall, rotate(u)] with the two walls being the top and
// bottom walls (either order) and all three rotations bitwise equal. Sensing
// events interleave freely. Two degenerate prefixes also qualify: a history
// whose actuations start [contact-move -> wall, rotate(u), contact-move ->
// other wall, rotate(u), contact-move -> blue] (period begun at stage 0), and
// a blue-face contact-move that is the history's very first actuation (the
// robot started on the cycle at the face). Omniscient moves that push the
// blue face always count. The rule is phase-invariant: any block phasing of
// the wall/wall/face contacts counts each face push exactly once.
// ---------------------------------------------------------------------------

namespace detail {

struct ActuationSummary {
  EventKind kind{};
  double u = 0.0;
  std::optional<SurfaceId> contact;
};

inline bool is_wall(const std::optional<SurfaceId>& s) {
  return s && (*s == SurfaceId::TopWall || *s == SurfaceId::BottomWall);
}

inline bool opposite_walls(const std::optional<SurfaceId>& a, const std::optional<SurfaceId>& b) {
  return is_wall(a) && is_wall(b) && *a != *b;
}

inline bool is_contact_move(const ActuationSummary& s) {
  return s.kind == EventKind::MoveToContact;
}

inline bool is_rotation(const ActuationSummary& s) { return s.kind == EventKind::Rotate; }

}  // namespace detail

// Incremental progress counter: O(1) per event, fed every event in order.
class CountTracker {
 public:
  void on_event(const Event& e) {
    if (!is_actuation(e.kind)) return;
    if (e.kind == EventKind::OmniMove) {
      if (e.pushed && e.contact == SurfaceId::BlueFace) ++count_;
    } else if (e.kind == EventKind::MoveToContact && e.contact == SurfaceId::BlueFace) {
      if (qualifies()) ++count_;
    }
    push_summary({e.kind, e.u, e.contact});
  }

  std::uint64_t count() const { return count_; }

 private:
  bool qualifies() const {
    using namespace detail;
    const std::size_t n = seen_;
    if (n == 0) return true;  // first actuation: started on the cycle at the face
    if (n == 4 && ring_.size() == 4) {
      return is_contact_move(ring_[0]) && is_wall(ring_[0].contact) && is_rotation(ring_[1]) &&
             is_contact_move(ring_[2]) && opposite_walls(ring_[0].contact, ring_[2].contact) &&
             is_rotation(ring_[3]) && ring_[1].u == ring_[3].u;
    }
    if (n >= 5) {
      const std::size_t m = ring_.size();
      const auto& a0 = ring_[m - 5];
      const auto& t1 = ring_[m - 4];
      const auto& a1 = ring_[m - 3];
      const auto& t2 = ring_[m - 2];
      const auto& a2 = ring_[m - 1];
      return is_rotation(a0) && is_contact_move(t1) && is_rotation(a1) && is_contact_move(t2) &&
             is_rotation(a2) && opposite_walls(t1.contact, t2.contact) && a0.u == a1.u &&
             a1.u == a2.u;
    }
    return false;
  }

  void push_summary(detail::ActuationSummary s) {
    ring_.push_back(s);
    if (ring_.size() > 5) ring_.pop_front();
    ++seen_;
  }

  std::deque<detail::ActuationSummary> ring_;
  std::size_t seen_ = 0;  // total actuations observed
  std::uint64_t count_ = 0;
};

}  // namespace bounce

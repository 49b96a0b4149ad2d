#pragma once

// Information spaces over the event history.
//
// The history I-state is the raw record (initial condition + events). The
// derived I-state collapses it to a single progress count; the goal region
// and preference order are defined on that count. kappa_count here is a
// deliberate re-implementation of the incremental CountTracker (a batch scan
// over the whole history) so the two can cross-check each other.

#include <cstdint>
#include <vector>

#include "bounce/history.hpp"

namespace bounce {

struct DerivedIState {
  std::uint64_t count = 0;
};

// Batch progress recount over a full history. Same definition as
// CountTracker (see history.hpp for the period-window rule), mechanized
// independently: gather actuation summaries first, then test each blue-face
// contact-move against the window by direct indexing.
inline std::uint64_t kappa_count(const History& h) {
  using detail::ActuationSummary;
  std::vector<ActuationSummary> acts;
  std::vector<std::size_t> blue_contact_acts;  // indices into acts
  std::uint64_t count = 0;
  acts.reserve(h.events.size());
  for (const Event& e : h.events) {
    if (!is_actuation(e.kind)) continue;
    if (e.kind == EventKind::OmniMove && e.pushed && e.contact == SurfaceId::BlueFace) {
      ++count;
    }
    if (e.kind == EventKind::MoveToContact && e.contact == SurfaceId::BlueFace) {
      blue_contact_acts.push_back(acts.size());
    }
    acts.push_back({e.kind, e.u, e.contact});
  }

  auto rot = [&](std::size_t i) { return detail::is_rotation(acts[i]); };
  auto cmove = [&](std::size_t i) { return detail::is_contact_move(acts[i]); };

  for (std::size_t i : blue_contact_acts) {
    bool ok = false;
    if (i == 0) {
      ok = true;  // history's first actuation is already the face contact
    } else if (i == 4) {
      ok = cmove(0) && detail::is_wall(acts[0].contact) && rot(1) && cmove(2) &&
           detail::opposite_walls(acts[0].contact, acts[2].contact) && rot(3) &&
           acts[1].u == acts[3].u;
    } else if (i >= 5) {
      ok = rot(i - 5) && cmove(i - 4) && rot(i - 3) && cmove(i - 2) && rot(i - 1) &&
           detail::opposite_walls(acts[i - 4].contact, acts[i - 2].contact) &&
           acts[i - 5].u == acts[i - 3].u && acts[i - 3].u == acts[i - 1].u;
    }
    if (ok) ++count;
  }
  return count;
}

inline DerivedIState derive(const History& h) { return {kappa_count(h)}; }

// Goal: accumulate at least `pushes_needed` progress units.
struct GoalRegion {
  std::uint64_t pushes_needed = 0;

  bool contains(const DerivedIState& i) const { return i.count >= pushes_needed; }

  // Remaining progress, clipped at zero once the goal is reached.
  std::uint64_t deficit(const DerivedIState& i) const {
    return i.count >= pushes_needed ? 0 : pushes_needed - i.count;
  }

  // Total preorder "at least as close to the goal as": smaller deficit wins;
  // all goal states are equally (maximally) preferred.
  bool prefer(const DerivedIState& a, const DerivedIState& b) const {
    return deficit(a) <= deficit(b);
  }
};

}  // namespace bounce

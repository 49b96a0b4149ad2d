#pragma once

// Goal-directed controllers built from the motion/sensing primitives, plus the
// runner that executes one of them from a start pose until the push count
// reaches the goal, the controller concludes failure, or the stage budget runs
// out.  Four controllers are provided, ordered by how much they demand of the
// robot:
//
//   pi0  free-flying omniscient mover: flies to the left face and shoves.
//   pi1  full sensing suite: searches the corridor, then locks into the
//        three-contact bounce cycle against the left face.
//   pi2  no bounded moves and no far-face color sensing: can only succeed if
//        the left face is already in view; otherwise it concludes failure.
//   pi3  contact-and-color only: probes for the cycle blindly and concludes
//        failure unless it was dropped onto one.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "bouncemap.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "history.hpp"
#include "ispace.hpp"
#include "primitives.hpp"
#include "world.hpp"

namespace bounce {

enum class PolicyId { Pi0, Pi1, Pi2, Pi3 };

inline const char* policy_name(PolicyId p) {
  switch (p) {
    case PolicyId::Pi0: return "pi0";
    case PolicyId::Pi1: return "pi1";
    case PolicyId::Pi2: return "pi2";
    case PolicyId::Pi3: return "pi3";
  }
  return "?";
}

inline std::optional<PolicyId> parse_policy(std::string_view s) {
  if (s == "pi0") return PolicyId::Pi0;
  if (s == "pi1") return PolicyId::Pi1;
  if (s == "pi2") return PolicyId::Pi2;
  if (s == "pi3") return PolicyId::Pi3;
  return std::nullopt;
}

enum class FsmState { Initial, Left, Right, Middle, LimitCycle, Lost, Done };

inline const char* fsm_state_name(FsmState s) {
  switch (s) {
    case FsmState::Initial: return "initial";
    case FsmState::Left: return "left";
    case FsmState::Right: return "right";
    case FsmState::Middle: return "middle";
    case FsmState::LimitCycle: return "limit_cycle";
    case FsmState::Lost: return "lost";
    case FsmState::Done: return "done";
  }
  return "?";
}

enum class Terminal { Done, Lost, Inconclusive };

inline const char* terminal_name(Terminal t) {
  switch (t) {
    case Terminal::Done: return "done";
    case Terminal::Lost: return "lost";
    case Terminal::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct PolicyConfig {
  double phi = kPi / 180.0;  // sweep rotation step
  double delta = 0.05;       // walking step length
  double theta = kPi / 3.0;  // interior angle of the bounce cycle
  std::uint64_t goal_count = 0;  // 0: derived from the world geometry
  std::uint64_t max_stages = 1000000;
  std::uint64_t seed = 0;
  bool collect_trace = false;
  // Cycle survey reused across runs; computed on demand for pi1/pi2 when
  // absent.  Callers doing many runs should compute it once and share it.
  std::optional<Basin> basin;
};

struct TraceRow {
  std::uint64_t stage = 0;
  FsmState state = FsmState::Initial;
  Pose pose{};
  double cart_x = 0.0;
  std::uint64_t count = 0;
};

struct Outcome {
  PolicyId policy = PolicyId::Pi0;
  std::uint64_t seed = 0;
  Pose start{};
  bool success = false;
  Terminal terminal = Terminal::Inconclusive;
  std::uint64_t count = 0;
  std::uint64_t stages = 0;
  double cart_x = 0.0;
  std::vector<TraceRow> trace;
};

// Number of unit pushes needed before the cart's right edge reaches the goal
// line.  Zero when it is already there; unbounded when pushes do not move it.
inline std::uint64_t default_goal_count(const World& w) {
  const WorldParams& p = w.params();
  const double edge = w.cart_x() + p.cart_half_length;
  if (edge >= p.goal_x) return 0;
  if (!(p.epsilon > 0.0)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::ceil((p.goal_x - edge) / p.epsilon - 1e-9));
}

inline RobotSpec default_robot(PolicyId p) {
  switch (p) {
    case PolicyId::Pi0: return RobotSpec::r0();
    case PolicyId::Pi1: return RobotSpec::r1();
    case PolicyId::Pi2: return RobotSpec::r2();
    case PolicyId::Pi3: return RobotSpec::r3();
  }
  return RobotSpec::r0();
}

inline std::vector<Primitive> required_primitives(PolicyId p) {
  switch (p) {
    case PolicyId::Pi0:
      return {Primitive::Omni};
    case PolicyId::Pi1:
      return {Primitive::Rotate, Primitive::BoundedMove, Primitive::MoveToContact,
              Primitive::RangeSense, Primitive::BlueSense, Primitive::YellowSense};
    case PolicyId::Pi2:
      return {Primitive::Rotate, Primitive::MoveToContact, Primitive::RangeSense,
              Primitive::BlueSense};
    case PolicyId::Pi3:
      return {Primitive::Rotate, Primitive::MoveToContact, Primitive::BlueSense};
  }
  return {};
}

namespace detail {

struct StopRun {
  Terminal t;
};

class PolicyRunner {
 public:
  PolicyRunner(PolicyId policy, const RobotSpec& spec, const World& world, Pose start,
               const PolicyConfig& cfg)
      : policy_(policy), cfg_(cfg), s_(world, start, spec), start_(start), rng_{cfg.seed} {
    for (Primitive pr : required_primitives(policy)) {
      if (!spec.has(pr)) {
        throw PrimitiveUnavailable(std::string(policy_name(policy)) + " needs " +
                                   primitive_name(pr));
      }
    }
    goal_n_ = cfg_.goal_count ? cfg_.goal_count : default_goal_count(world);
    sweep_steps_ = static_cast<int>(std::ceil(kTwoPi / cfg_.phi - 1e-9));
    if (policy == PolicyId::Pi1 || policy == PolicyId::Pi2) {
      basin_ = cfg_.basin ? *cfg_.basin : estimate_basin(cfg_.theta, world);
    }
    fallback_u_ = kPi - cfg_.theta;
  }

  Outcome run() {
    Outcome out;
    out.policy = policy_;
    out.seed = cfg_.seed;
    out.start = start_;
    Terminal term = Terminal::Inconclusive;
    try {
      if (s_.count() >= goal_n_) throw StopRun{Terminal::Done};
      if (cfg_.max_stages == 0) throw StopRun{Terminal::Inconclusive};
      dispatch();
    } catch (const StopRun& stop) {
      term = stop.t;
    }
    out.terminal = term;
    out.success = s_.count() >= goal_n_;
    out.count = s_.count();
    out.stages = s_.stage();
    out.cart_x = s_.world.cart_x();
    out.trace = std::move(trace_);
    return out;
  }

  const SimState& state() const { return s_; }

 private:
  // ---- stage bookkeeping -------------------------------------------------

  void after_stage() {
    if (cfg_.collect_trace) {
      trace_.push_back({s_.stage(), fsm_, s_.robot, s_.world.cart_x(), s_.count()});
    }
    if (s_.count() >= goal_n_) throw StopRun{Terminal::Done};
    if (s_.stage() >= cfg_.max_stages) throw StopRun{Terminal::Inconclusive};
  }

  void rot(double u) {
    exec_rotate(s_, u);
    after_stage();
  }
  void mv(double u) {
    exec_bounded_move(s_, u);
    after_stage();
  }
  std::optional<SurfaceId> mtc() {
    exec_move_to_contact(s_);
    std::optional<SurfaceId> c = s_.history.events.back().contact;
    after_stage();
    return c;
  }
  double range() {
    const double r = sense_range(s_);
    after_stage();
    return r;
  }
  int blue() {
    const int b = sense_blue(s_);
    after_stage();
    return b;
  }
  int yellow() {
    const int y = sense_yellow(s_);
    after_stage();
    return y;
  }
  void omni(double dx, double dy, double du) {
    exec_omni_move(s_, dx, dy, du);
    after_stage();
  }
  void osense() {
    exec_omni_sense(s_);
    after_stage();
  }

  // ---- sensing subroutines ----------------------------------------------

  struct Observation {
    int blue = 0;
    int yellow = 0;
    double range = kInf;
  };

  // Sweep a full turn in phi steps, sensing before each rotation, until a
  // colored face comes into view.  Reads the range only when one did; a full
  // fruitless sweep ends back at (very nearly) the entry heading.
  Observation observe(bool with_yellow, bool with_range) {
    Observation ob;
    for (int k = 0;; ++k) {
      ob.blue = blue();
      if (!ob.blue && with_yellow) ob.yellow = yellow();
      if (ob.blue || ob.yellow) break;
      if (k >= sweep_steps_) break;
      rot(cfg_.phi);
    }
    if ((ob.blue || ob.yellow) && with_range) ob.range = range();
    return ob;
  }

  // Rotate until the chosen face is in view; true on success.  Cheap when the
  // face is already in view (single sense).
  bool aim(bool blue_face) {
    for (int k = 0; k <= sweep_steps_; ++k) {
      const int seen = blue_face ? blue() : yellow();
      if (seen) return true;
      rot(cfg_.phi);
    }
    return false;
  }

  // One walking step: rotate to an open heading (reading beyond the sensing
  // horizon), or failing that to the most open heading seen over a full
  // sweep, then take a bounded step.
  void wall_follow(double step_len) {
    double r = range();
    if (std::isinf(r)) {
      mv(step_len);
      return;
    }
    double best_r = r;
    int best_k = 0;
    for (int k = 1; k <= sweep_steps_; ++k) {
      rot(cfg_.phi);
      r = range();
      if (std::isinf(r)) {
        mv(step_len);
        return;
      }
      if (r > best_r) {
        best_r = r;
        best_k = k;
      }
    }
    rot(cfg_.phi * (best_k - sweep_steps_));
    mv(step_len);
  }

  // ---- face fixing (bearing + relative pose from one colored face) -------

  struct FaceFix {
    double dist = 0.0;     // perpendicular distance to the face plane
    double py = 0.0;       // own height above the bottom wall
    double heading = 0.0;  // own absolute heading after the probing ended
  };

  // Locate the edges of the angular window in which the chosen face is seen,
  // read the range mid-window, and solve for the relative pose.  Because the
  // face is vertical with a known extent, the two edge bearings plus one
  // range reading pin down the distance, the height, and the absolute
  // heading.  A second reading a quarter-window off validates the solution
  // (and rejects windows clipped by the sensing horizon rather than by the
  // face corners).  Precondition: the face is in view at the current heading.
  std::optional<FaceFix> try_fix(bool blue_face) {
    const double flip = blue_face ? 1.0 : -1.0;
    double cur = 0.0;
    auto probe = [&](double off) {
      rot(off - cur);
      cur = off;
      return blue_face ? blue() : yellow();
    };
    auto find_edge = [&](double sign) -> std::optional<double> {
      double inside = 0.0;
      std::optional<double> outside;
      for (int k = 1; k <= 36; ++k) {
        const double off = sign * k * (10.0 * kPi / 180.0);
        if (!probe(off)) {
          outside = off;
          break;
        }
        inside = off;
      }
      if (!outside) return std::nullopt;
      for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (inside + *outside);
        if (probe(mid)) {
          inside = mid;
        } else {
          *outside = mid;
        }
      }
      return 0.5 * (inside + *outside);
    };

    const std::optional<double> oa = find_edge(+1.0);
    if (!oa) return std::nullopt;
    const std::optional<double> ob = find_edge(-1.0);
    if (!ob) return std::nullopt;

    // Work in a frame whose x axis points from the robot toward the face
    // plane; for the right-hand face that frame is mirrored, which flips the
    // sense of relative rotations.
    const double ra = flip * *oa;
    const double rb = flip * *ob;
    const double r_lo = std::min(ra, rb);
    const double span = std::max(ra, rb) - r_lo;
    if (span < 1e-4 || span > kPi - 1e-3) return std::nullopt;

    const double o_mid = 0.5 * (*oa + *ob);
    rot(o_mid - cur);
    cur = o_mid;
    const double r_m = range();
    if (!std::isfinite(r_m)) return std::nullopt;

    const double face_extent = s_.world.cart_high_y() - s_.world.cart_low_y();
    auto f = [&](double wl) {
      return r_m * std::cos(wl + 0.5 * span) * (std::tan(wl + span) - std::tan(wl)) -
             face_extent;
    };
    std::vector<double> roots;
    const double lo = -1.53;
    const double hi = 1.53 - span;
    if (hi <= lo) return std::nullopt;
    const int cells = 2400;
    std::vector<double> fv(cells + 1);
    for (int i = 0; i <= cells; ++i) fv[i] = f(lo + (hi - lo) * i / cells);
    for (int i = 1; i <= cells; ++i) {
      if (!std::isfinite(fv[i - 1]) || !std::isfinite(fv[i])) continue;
      if ((fv[i - 1] < 0.0) == (fv[i] < 0.0)) continue;
      double a = lo + (hi - lo) * (i - 1) / cells;
      double b = lo + (hi - lo) * i / cells;
      const bool neg_a = fv[i - 1] < 0.0;
      for (int it = 0; it < 60; ++it) {
        const double m = 0.5 * (a + b);
        if ((f(m) < 0.0) == neg_a) {
          a = m;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    // A robot centered on the face produces a tangent root (the function
    // touches zero without crossing), invisible to the sign scan.  Shallow
    // local minima are therefore candidates too; the validation reading
    // below rejects ones that are not genuine solutions.
    for (int i = 1; i < cells; ++i) {
      if (!std::isfinite(fv[i])) continue;
      if (fv[i] < 0.0 || fv[i] >= 1e-2) continue;
      if (!(fv[i] <= fv[i - 1] && fv[i] <= fv[i + 1])) continue;
      double a = lo + (hi - lo) * (i - 1) / cells;
      double b = lo + (hi - lo) * (i + 1) / cells;
      for (int it = 0; it < 70; ++it) {
        const double m1 = a + (b - a) / 3.0;
        const double m2 = b - (b - a) / 3.0;
        if (f(m1) < f(m2)) {
          b = m2;
        } else {
          a = m1;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    if (roots.empty()) return std::nullopt;

    // Validation reading a quarter-window above the lower edge; it also
    // disambiguates the (generically two) solver roots.
    const double o_q = flip * (r_lo + 0.25 * span);
    rot(o_q - cur);
    cur = o_q;
    const double r_q = range();
    if (!std::isfinite(r_q)) return std::nullopt;
    double best_wl = 0.0;
    double best_res = kInf;
    for (double wl : roots) {
      const double dist = r_m * std::cos(wl + 0.5 * span);
      if (!(dist > 0.01)) continue;
      const double pred = dist / std::cos(wl + 0.25 * span);
      const double res = std::abs(pred - r_q);
      if (res < best_res) {
        best_res = res;
        best_wl = wl;
      }
    }
    if (!(best_res <= 1e-6 * (1.0 + r_q))) return std::nullopt;

    const double wl = best_wl;
    const double dist = r_m * std::cos(wl + 0.5 * span);
    // Both corners must have been genuinely observable for the edges to be
    // corner bearings rather than sensing-horizon artifacts.
    const double horizon = s_.world.params().max_range;
    if (dist / std::cos(wl) > horizon - 0.01) return std::nullopt;
    if (dist / std::cos(wl + span) > horizon - 0.01) return std::nullopt;

    FaceFix fix;
    fix.dist = dist;
    fix.py = s_.world.cart_low_y() - dist * std::tan(wl);
    const double toward = wl + 0.25 * span;  // current bearing in the face frame
    fix.heading = blue_face ? toward : kPi - toward;
    return fix;
  }

  // ---- cycle entry -------------------------------------------------------

  struct EntryPlan {
    double rotate_by = 0.0;  // relative rotation onto the approach heading
    double u = 0.0;          // per-contact rotation once on the cycle
  };

  // From a pose with the left face in view, pick a bounce cycle whose
  // approach ray from here lands on the face, whose fixed point and whole
  // transient stay within the face margins, and whose contraction is strong;
  // both turning senses are considered.  Pure arithmetic except for the face
  // fix itself.
  std::optional<EntryPlan> try_align() {
    const std::optional<FaceFix> fix = try_fix(true);
    if (!fix) return std::nullopt;
    fallback_u_ = (fix->heading >= 0.0 ? 1.0 : -1.0) * (kPi - cfg_.theta);

    const double width = s_.world.params().width;
    const double margin = 2e-3;
    const double y_lo = s_.world.cart_low_y() + margin;
    const double y_hi = s_.world.cart_high_y() - margin;

    double best_score = kInf;
    EntryPlan best;
    for (const CycleAnalysis& c : basin_->cycles) {
      if (std::abs(c.jac) > 0.9) continue;
      // Reach of the wall legs beyond the face plane; keep it clear of the
      // corridor ends.
      const double tip = (width - c.x_fp) * std::tan(kPi - cfg_.theta - c.alpha);
      const double leg2 = 1.5 * kPi - 2.0 * cfg_.theta - c.alpha;
      const double reach = tip + width * std::cos(leg2) / std::sin(leg2);
      if (!std::isfinite(reach) || std::abs(reach) > 3.0) continue;
      for (int fam = 0; fam < 2; ++fam) {
        const bool ccw = fam == 0;
        const double target = ccw ? c.x_fp : width - c.x_fp;
        const double h = ccw ? (kPi / 2.0 - c.alpha) : (c.alpha - kPi / 2.0);
        if (std::cos(h) < 0.05) continue;
        const double h0 = fix->py + fix->dist * std::tan(h);
        if (!(h0 > y_lo && h0 < y_hi)) continue;
        if (!(target > y_lo && target < y_hi)) continue;
        // The return map is affine with slope c.jac, so after the entry
        // impact at h0 every later impact stays within |jac|-times the entry
        // offset around the fixed point.
        const double e0 = std::abs(h0 - target);
        const double swing = std::abs(c.jac) * e0;
        if (!(target + swing < y_hi && target - swing > y_lo)) continue;
        const double score = std::abs(c.jac) + 0.001 * e0;
        if (score < best_score) {
          best_score = score;
          best.rotate_by = angle_diff(h, fix->heading);
          best.u = ccw ? (kPi - cfg_.theta) : -(kPi - cfg_.theta);
        }
      }
    }
    if (best_score == kInf) return std::nullopt;
    return best;
  }

  // Ride the cycle: contact, turn, repeat.  Progress is measured by the push
  // count; a drought of five contact moves without an increment means the
  // pattern is broken.
  void lc_ride(double u) {
    int drought = 0;
    while (true) {
      const std::uint64_t before = s_.count();
      mtc();
      drought = (s_.count() > before) ? 0 : drought + 1;
      if (drought >= 5) {
        if (policy_ == PolicyId::Pi1) {
          fsm_ = FsmState::Middle;
          return;
        }
        lost_state();
      }
      rot(u);
    }
  }

  // ---- FSM states --------------------------------------------------------

  void dispatch() {
    if (policy_ == PolicyId::Pi0) {
      pi0();
      return;
    }
    if (policy_ == PolicyId::Pi3) {
      pi3();
      return;
    }
    fsm_ = FsmState::Initial;
    while (true) {
      switch (fsm_) {
        case FsmState::Initial: initial_state(); break;
        case FsmState::Left: left_state(); break;
        case FsmState::Right: right_state(); break;
        case FsmState::Middle: middle_state(); break;
        case FsmState::LimitCycle: limit_cycle_state(); break;
        default: lost_state(); break;
      }
    }
  }

  void initial_state() {
    const Observation ob = observe(policy_ == PolicyId::Pi1, true);
    if (ob.blue && basin_->contains(ob.range)) {
      fsm_ = FsmState::LimitCycle;
      return;
    }
    if (ob.blue) {
      fsm_ = FsmState::Left;
      return;
    }
    if (policy_ == PolicyId::Pi1) {
      fsm_ = ob.yellow ? FsmState::Right : FsmState::Middle;
      return;
    }
    fsm_ = FsmState::Lost;
  }

  void left_state() {
    if (!aim(true)) {
      fsm_ = (policy_ == PolicyId::Pi1) ? FsmState::Middle : FsmState::Lost;
      return;
    }
    fsm_ = FsmState::LimitCycle;
  }

  // Wrong side of the object: fix the bearing off the right-hand face, cross
  // to the far end through the channel above the object, then walk back
  // toward the left face.  While the fix cannot be established (face too far
  // for both corners to be ranged), step closer and retry.
  void right_state() {
    if (!aim(false)) {
      fsm_ = FsmState::Middle;
      return;
    }
    const std::optional<FaceFix> fix = try_fix(false);
    if (!fix) {
      // Unsolvable sighting (typically a pose nearly level with a face
      // corner). Never step toward the face here — creeping into it shoves
      // the object backward; let Middle's walk change the vantage instead.
      fsm_ = FsmState::Middle;
      return;
    }
    // Move to a standoff point in the channel between the object's top and
    // the wall, then drive along the corridor axis: the contact ride passes
    // over the object and ends at the far end cap, on the object's far side.
    const double channel_y = 0.5 * (s_.world.cart_high_y() + s_.world.params().width);
    const double stand_off = 0.25;
    const Vec2 v{stand_off - fix->dist, channel_y - fix->py};
    double here = fix->heading;
    if (norm(v) > 1e-9) {
      const double ang = std::atan2(v.y, v.x);
      rot(angle_diff(ang, here));
      mv(norm(v));
      here = ang;
    }
    rot(angle_diff(kPi, here));
    mtc();
    fsm_ = FsmState::Middle;
  }

  // Nothing in view: walk the corridor, looking around after every step.
  // The turning sense of the first step is randomized.
  void middle_state() {
    if (rng_.next() & 1u) rot(kPi);
    while (true) {
      wall_follow(cfg_.delta);
      const Observation ob = observe(true, false);
      if (ob.blue) {
        fsm_ = FsmState::Left;
        return;
      }
      if (ob.yellow) {
        fsm_ = FsmState::Right;
        return;
      }
    }
  }

  void limit_cycle_state() {
    const std::optional<EntryPlan> plan = try_align();
    double u = fallback_u_;
    if (plan) {
      approach_legs_ = 0;
      rot(plan->rotate_by);
      u = plan->u;
    } else if (policy_ == PolicyId::Pi1) {
      // No certifiable entry from here. Far from the face (especially near
      // the corridor midline) every candidate's transient clips a face
      // margin; closing distance widens the feasible heading range, so walk
      // toward the sighted face and retry before giving the pose back to
      // Middle.
      if (approach_legs_ < 12 && aim(true)) {
        ++approach_legs_;
        mv(0.25);
        return;
      }
      approach_legs_ = 0;
      fsm_ = FsmState::Middle;
      return;
    }
    mtc();  // entry contact: lands on the face when the plan was sound
    rot(u);
    lc_ride(u);
  }

  [[noreturn]] void lost_state() {
    fsm_ = FsmState::Lost;
    mtc();  // one last contact move, then motionless for good
    throw StopRun{Terminal::Lost};
  }

  // ---- special-form controllers -----------------------------------------

  void pi0() {
    fsm_ = FsmState::Initial;
    osense();
    const WorldParams& p = s_.world.params();
    auto face_x = [&]() { return s_.history.events.back().cart_after - p.cart_half_length; };
    auto at = [&]() { return s_.history.events.back().pose_after.p; };
    if (at().x >= face_x()) {
      // Wrong side: rise to the ceiling (or the object's top), slide across.
      omni(0.0, p.width, 0.0);
      omni(face_x() - at().x, 0.0, 0.0);
    }
    fsm_ = FsmState::Left;
    const double mid_y = 0.5 * p.width;
    while (true) {
      omni(face_x() - at().x, mid_y - at().y, 0.0);
      omni(p.epsilon, 0.0, 0.0);
    }
  }

  void pi3() {
    fsm_ = FsmState::Initial;
    const double u = kPi - cfg_.theta;
    int seen = 0;
    int probes = 0;
    while (seen < 2 && probes < 6) {
      ++probes;
      if (blue()) ++seen;
      mtc();
      rot(u);
    }
    if (seen < 2) lost_state();
    fsm_ = FsmState::LimitCycle;
    lc_ride(u);
    lost_state();  // unreachable: the ride never returns for pi3
  }

  // ---- members -----------------------------------------------------------

  PolicyId policy_;
  PolicyConfig cfg_;
  SimState s_;
  Pose start_;
  SplitMix64 rng_;
  std::optional<Basin> basin_;
  std::uint64_t goal_n_ = 0;
  int sweep_steps_ = 360;
  double fallback_u_ = 0.0;
  int approach_legs_ = 0;  // consecutive close-the-distance moves without a certified entry
  FsmState fsm_ = FsmState::Initial;
  std::vector<TraceRow> trace_;
};

}  // namespace detail

// Run a controller on a robot in a world.  Throws PrimitiveUnavailable when
// the robot lacks a primitive the controller invokes (before consuming any
// stage); otherwise always returns a verdict: done (goal count reached), lost
// (the controller concluded failure and stopped), or inconclusive (stage
// budget exhausted).
inline Outcome run_policy(PolicyId policy, const RobotSpec& spec, const World& world,
                          Pose start, const PolicyConfig& cfg = {},
                          History* history_out = nullptr) {
  detail::PolicyRunner runner(policy, spec, world, start, cfg);
  Outcome out = runner.run();
  if (history_out != nullptr) *history_out = runner.state().history;
  return out;
}

}  // namespace bounce

#pragma once

// Analysis of bouncing trajectories between the corridor walls and the cart
// face: the closed-form face-to-face return map, its fixed point and
// contraction factor, a geometric simulator that cross-checks the formulas,
// basin estimation for the cycle, and the fixed / two-rule bounce strategies.
//
// Conventions (pinned by the geometric oracle): heights are measured along
// the face from the bottom wall, in [0, ell] where ell is the wall spacing.
// In the counterclockwise family the robot approaches the face ascending at
// world heading pi/2 - alpha and every bounce rotates the heading by
// +(pi - theta), where theta is the cycle's interior angle; one period visits
// face -> top wall -> bottom wall -> face. The clockwise family is the y
// mirror. A period closes onto the same approach angle only when
// 3*theta = pi; for other theta the approach angle drifts by
// alpha + 3*theta - pi per period.

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "bounce/errors.hpp"
#include "bounce/geometry.hpp"
#include "bounce/world.hpp"

namespace bounce {

enum class Orientation { CCW, CW };

namespace detail {

// Distance from `v` to the nearest pole of tan (pi/2 + k*pi).
inline double tan_pole_distance(double v) {
  double r = std::fmod(std::abs(v), kPi);
  return std::abs(r - kPi / 2);
}

// Distance from `v` to the nearest pole of cot (k*pi).
inline double cot_pole_distance(double v) {
  double r = std::fmod(std::abs(v), kPi);
  return std::min(r, kPi - r);
}

inline constexpr double kPoleEps = 1e-9;

inline double checked_tan(double v, const char* where) {
  if (tan_pole_distance(v) < kPoleEps) {
    throw SingularParameters(std::string(where) + ": tangent pole");
  }
  return std::tan(v);
}

inline double checked_cot(double v, const char* where) {
  if (cot_pole_distance(v) < kPoleEps) {
    throw SingularParameters(std::string(where) + ": cotangent pole");
  }
  return 1.0 / std::tan(v);
}

}  // namespace detail

// One period of the face-to-face return map (counterclockwise family),
// built from the three legs' horizontal runs:
//   y  = (ell - x) * tan(pi - theta - alpha)        leftward run to the top wall
//   z  = y + ell * cot(3*pi/2 - 2*theta - alpha)    leftward offset at the bottom wall
//   x' = z * tan(3*pi/2 - alpha - 3*theta)          height of the next face impact
// The map is affine in x.
inline double return_map(double x, double alpha, double theta, double ell = 1.0) {
  using detail::checked_cot;
  using detail::checked_tan;
  const double y = (ell - x) * checked_tan(kPi - theta - alpha, "return_map leg 1");
  const double z = y + ell * checked_cot(3 * kPi / 2 - 2 * theta - alpha, "return_map leg 2");
  return z * checked_tan(3 * kPi / 2 - alpha - 3 * theta, "return_map leg 3");
}

// Contraction factor of the return map (its slope in x).
inline double jacobian(double alpha, double theta) {
  using detail::checked_tan;
  return -checked_tan(alpha + theta, "jacobian") *
         checked_tan(alpha + 3 * theta - kPi / 2, "jacobian");
}

// Unique fixed point of the affine return map.
inline double fixed_point(double alpha, double theta, double ell = 1.0) {
  using detail::checked_tan;
  const double t1 = checked_tan(alpha + theta, "fixed_point");
  const double t2 = checked_tan(alpha + 2 * theta, "fixed_point");
  const double t3 = checked_tan(alpha + 3 * theta, "fixed_point");
  const double den = t1 - t3;
  if (std::abs(den) < 1e-9) {
    throw DegenerateDenominator("fixed_point: map slope is 1, no unique fixed point");
  }
  return ell * (t1 - t2) / den;
}

// A long, gapless corridor whose object face spans the full wall spacing:
// the reference environment for validating cycles geometrically.
inline World oracle_world(double ell = 1.0) {
  WorldParams p;
  p.width = ell;
  p.length = 400.0 * ell;
  p.cart_half_length = 0.5 * ell;
  p.cart_height = ell;  // gap 0
  p.epsilon = 0.0;
  p.goal_x = 399.0 * ell;
  p.max_range = 5.0 * ell;
  p.cart_x = 300.0 * ell;
  return World(p);
}

// Simulates one period geometrically with exact ray casts (no standoffs):
// start at height x on the blue face, bounce, and follow the three legs.
// Returns the next impact height, or nullopt when the legs do not visit
// top wall -> bottom wall -> face in order (the cycle does not exist there).
inline std::optional<double> simulate_period(double x, double alpha, double theta,
                                             const World& w,
                                             Orientation o = Orientation::CCW) {
  const double ell = w.params().width;
  const double face_x = w.blue_x();
  const double rot = (o == Orientation::CCW) ? (kPi - theta) : -(kPi - theta);
  const double approach = (o == Orientation::CCW) ? (kPi / 2 - alpha) : (alpha - kPi / 2);
  const SurfaceId first_wall =
      (o == Orientation::CCW) ? SurfaceId::TopWall : SurfaceId::BottomWall;
  const SurfaceId second_wall =
      (o == Orientation::CCW) ? SurfaceId::BottomWall : SurfaceId::TopWall;

  Vec2 p{face_x, x};
  double h = normalize_angle(approach + rot);
  auto leg = [&](SurfaceId expect) -> bool {
    auto hit = w.ray_cast({p, h});
    if (!hit) return false;
    // Wall/cart-lid ties on gapless worlds resolve to the wall, which is what
    // the cycle wants; anything else breaks the period.
    if (hit->surface != expect) return false;
    p = hit->point;
    h = normalize_angle(h + rot);
    return true;
  };
  if (!leg(first_wall)) return std::nullopt;
  if (!leg(second_wall)) return std::nullopt;
  auto back = w.ray_cast({p, h});
  if (!back || back->surface != SurfaceId::BlueFace) return std::nullopt;
  return back->point.y;
}

struct CycleAnalysis {
  double alpha = 0.0;
  double theta = 0.0;
  double x_fp = std::numeric_limits<double>::quiet_NaN();
  double jac = std::numeric_limits<double>::quiet_NaN();
  bool feasible = false;
  Orientation orientation = Orientation::CCW;
};

// Closed-form fixed point and contraction, validated by forward-simulating
// one geometric period from the fixed point: feasible iff the legs close the
// period back onto the fixed point within 1e-9 * ell and the fixed point
// lies strictly inside the face. Singular or degenerate parameters yield an
// infeasible analysis rather than an exception.
inline CycleAnalysis validate_cycle(double alpha, double theta, double ell = 1.0,
                                    Orientation o = Orientation::CCW) {
  CycleAnalysis a;
  a.alpha = alpha;
  a.theta = theta;
  a.orientation = o;
  double xfp_ccw, jac;
  try {
    xfp_ccw = fixed_point(alpha, theta, ell);
    jac = jacobian(alpha, theta);
  } catch (const SingularParameters&) {
    return a;
  } catch (const DegenerateDenominator&) {
    return a;
  }
  a.jac = jac;
  a.x_fp = (o == Orientation::CCW) ? xfp_ccw : ell - xfp_ccw;
  if (!(a.x_fp > 0.0 && a.x_fp < ell)) return a;
  World w = oracle_world(ell);
  auto next = simulate_period(a.x_fp, alpha, theta, w, o);
  if (!next) return a;
  a.feasible = std::abs(*next - a.x_fp) <= 1e-9 * ell;
  return a;
}

// ---------------------------------------------------------------------------
// Parameter sweeps.
// ---------------------------------------------------------------------------

struct SweepRow {
  double alpha = 0.0;
  double theta = 0.0;
  CycleAnalysis cycle;
};

inline std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> v;
  if (step <= 0.0) throw std::invalid_argument("grid: step must be positive");
  for (double x = lo; x <= hi + step * 1e-9; x += step) v.push_back(std::min(x, hi));
  if (!v.empty() && v.size() >= 2 && v[v.size() - 1] == v[v.size() - 2]) v.pop_back();
  return v;
}

inline std::vector<SweepRow> sweep_fixed_points(double theta, double alpha_lo, double alpha_hi,
                                                double alpha_step, double ell = 1.0) {
  std::vector<SweepRow> rows;
  for (double a : grid(alpha_lo, alpha_hi, alpha_step)) {
    rows.push_back({a, theta, validate_cycle(a, theta, ell)});
  }
  return rows;
}

inline std::vector<SweepRow> jacobian_map(double alpha_lo, double alpha_hi, double alpha_step,
                                          double theta_lo, double theta_hi, double theta_step,
                                          double ell = 1.0) {
  std::vector<SweepRow> rows;
  for (double a : grid(alpha_lo, alpha_hi, alpha_step)) {
    for (double t : grid(theta_lo, theta_hi, theta_step)) {
      rows.push_back({a, t, validate_cycle(a, t, ell)});
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Basin of attraction, expressed over range readings.
// ---------------------------------------------------------------------------

struct Basin {
  double theta = 0.0;
  double alpha = 0.0;   // reference approach angle: feasible, most contracting
  double x_fp = 0.0;
  double jac = 0.0;
  double leg_length = 0.0;  // length of the approach leg of the reference cycle
  std::vector<std::pair<double, double>> reading_intervals;
  std::vector<CycleAnalysis> cycles;  // every feasible cycle found in the scan

  bool contains(double reading) const {
    if (!std::isfinite(reading)) return false;
    for (auto& [lo, hi] : reading_intervals) {
      if (reading >= lo && reading <= hi) return true;
    }
    return false;
  }
};

// Estimates which face-distance readings lie in the stable cycle's basin:
// picks the feasible approach angle with the smallest contraction factor
// (fixed point within [0.1, 0.9] of the wall spacing), seeds poses along the
// cycle's approach leg at sampled distances from the face, rides the bare
// bounce loop with pushes disabled, and keeps the distances whose impact
// heights settle to within 1e-6 * ell of the fixed point inside 50 periods.
// Contiguous converged samples merge into closed intervals.
inline Basin estimate_basin(double theta, const World& world, int samples = 1000) {
  const double ell = world.params().width;

  Basin best;
  best.theta = theta;
  bool found = false;
  for (double a : grid(0.05, kPi - 0.05, 0.005)) {
    CycleAnalysis c = validate_cycle(a, theta, ell);
    if (!c.feasible) continue;
    best.cycles.push_back(c);
    if (!(std::abs(c.jac) < 1.0)) continue;
    if (c.x_fp < 0.1 * ell || c.x_fp > 0.9 * ell) continue;
    if (!found || std::abs(c.jac) < std::abs(best.jac)) {
      best.alpha = a;
      best.x_fp = c.x_fp;
      best.jac = c.jac;
      found = true;
    }
  }
  if (!found) {
    throw NoStableCycle("estimate_basin: no stable feasible cycle for the given interior angle");
  }

  // Ride the cycle in a push-free copy of the given world.
  WorldParams frozen = world.params();
  frozen.epsilon = 0.0;
  frozen.cart_x = world.cart_x();
  World still(frozen);

  const double rot = kPi - theta;
  const double approach = kPi / 2 - best.alpha;
  const Vec2 dir = heading_vec(approach);
  const Vec2 face_point{still.blue_x(), best.x_fp};
  // Approach leg length: from the bottom-wall bounce to the face impact.
  best.leg_length = best.x_fp / std::max(dir.y, 1e-12);

  const double r_max = std::min(world.params().max_range, best.leg_length) * 0.999;
  std::vector<double> ok_readings;
  for (int i = 0; i < samples; ++i) {
    const double r = r_max * (i + 1) / static_cast<double>(samples + 1);
    Vec2 start = face_point - r * dir;
    if (!still.in_free_space(start)) continue;
    Pose pose{start, approach};
    bool broke = false;
    int impacts = 0;
    double last_impact = std::numeric_limits<double>::quiet_NaN();
    for (int legn = 0; legn < 50 * 3 + 1; ++legn) {
      auto mv = still.move_until_contact(pose, 1e9);
      if (!mv.contact) {
        broke = true;
        break;
      }
      pose = mv.end;
      if (*mv.contact == SurfaceId::BlueFace) {
        last_impact = pose.p.y;
        ++impacts;
      } else if (*mv.contact != SurfaceId::TopWall && *mv.contact != SurfaceId::BottomWall) {
        broke = true;  // wandered off the cycle's surfaces
        break;
      }
      pose = pose.rotated(rot);
    }
    const bool converged =
        !broke && impacts >= 10 && std::abs(last_impact - best.x_fp) <= 1e-6 * ell;
    if (converged) ok_readings.push_back(r);
  }

  // Merge adjacent converged samples into intervals.
  const double gap = r_max / static_cast<double>(samples + 1);
  for (std::size_t i = 0; i < ok_readings.size();) {
    std::size_t j = i;
    while (j + 1 < ok_readings.size() && ok_readings[j + 1] - ok_readings[j] <= 1.5 * gap) ++j;
    best.reading_intervals.emplace_back(ok_readings[i], ok_readings[j]);
    i = j + 1;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Fixed and two-rule bounce strategies (no sensing, rule-driven headings).
// ---------------------------------------------------------------------------

enum class RuleKind { Fixed, FixedMonotonic };

namespace detail {

// Free-space tangent direction of each surface: interior lies to the left of
// the tangent, so exiting at tangent + beta (beta in (0, pi)) points into
// free space.
inline double surface_tangent(SurfaceId s) {
  switch (s) {
    case SurfaceId::BottomWall: return 0.0;          // free side above
    case SurfaceId::TopWall: return kPi;             // free side below
    case SurfaceId::BlueFace: return kPi / 2;        // free side to the left
    case SurfaceId::RightEndCap: return kPi / 2;     // free side to the left
    case SurfaceId::LeftEndCap: return 3 * kPi / 2;  // free side to the right
    case SurfaceId::YellowFace: return 3 * kPi / 2;  // free side to the right
    case SurfaceId::CartTop: return 0.0;             // free side above
    case SurfaceId::CartBottom: return kPi;          // free side below
  }
  return 0.0;
}

inline bool is_object_surface(SurfaceId s) {
  return s == SurfaceId::BlueFace || s == SurfaceId::YellowFace || s == SurfaceId::CartTop ||
         s == SurfaceId::CartBottom;
}

}  // namespace detail

struct Prop1Verdict {
  int object_contacts = 0;
  bool period2_detected = false;
  bool escape_detected = false;
  int bounces = 0;
};

// Runs a memoryless bounce rule from `start` for up to `max_bounces` exact
// bounces (ray chain, no standoffs, no pushes).
//
// Fixed rule: every exit leaves at the same angle beta from the surface's
// free-space tangent. Between parallel walls this is a standing two-cycle.
// FixedMonotonic: the exit additionally preserves a fixed horizontal drift
// direction (away from the object at the start), so the trajectory marches
// down the corridor.
//
// Detects a standing period-2 cycle (contact points repeating within
// 1e-9) and escape (drifting more than 50 wall spacings from the start).
inline Prop1Verdict check_prop1(RuleKind kind, double beta, const World& w, Pose start,
                                int max_bounces = 10000) {
  Prop1Verdict v;
  const double ell = w.params().width;
  Vec2 p = start.p;
  double h = start.heading;
  const double drift_sign = (start.p.x < w.cart_x()) ? -1.0 : 1.0;  // away from the object
  std::vector<Vec2> recent;
  for (int b = 0; b < max_bounces; ++b) {
    auto hit = w.ray_cast({p, h});
    if (!hit) break;
    p = hit->point;
    ++v.bounces;
    if (detail::is_object_surface(hit->surface)) ++v.object_contacts;

    if (kind == RuleKind::Fixed) {
      h = normalize_angle(detail::surface_tangent(hit->surface) + beta);
    } else {
      // Monotonic: exit at elevation beta with the drift's horizontal sign;
      // vertical surfaces reflect to the free side with the same drift.
      const double up = (hit->surface == SurfaceId::TopWall || hit->surface == SurfaceId::CartBottom)
                            ? -1.0
                            : 1.0;
      double hx = drift_sign * std::cos(beta);
      double hy = up * std::sin(beta);
      if (hit->surface == SurfaceId::BlueFace || hit->surface == SurfaceId::LeftEndCap) {
        hx = -std::abs(hx);
      } else if (hit->surface == SurfaceId::YellowFace || hit->surface == SurfaceId::RightEndCap) {
        hx = std::abs(hx);
      }
      h = std::atan2(hy, hx);
    }

    recent.push_back(p);
    if (recent.size() > 8) recent.erase(recent.begin());
    if (recent.size() >= 6) {
      const Vec2 a = recent[recent.size() - 1];
      const Vec2 c = recent[recent.size() - 3];
      const Vec2 e = recent[recent.size() - 5];
      if (norm(a - c) < 1e-9 * ell && norm(c - e) < 1e-9 * ell) {
        v.period2_detected = true;
        break;
      }
    }
    if (std::abs(p.x - start.p.x) > 50.0 * ell) {
      v.escape_detected = true;
      break;
    }
  }
  return v;
}

struct TwoRuleAnalysis {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double multiplier = 0.0;  // slope of the face return map
  double x_fp = 0.0;
  bool stable = false;
};

// One bit of memory turns bouncing into cart pushing: leave the object face
// at beta1 (clearing the bit), leave the first corridor wall at beta1
// (setting the bit), leave the second wall at beta2, which aims back at the
// face. The face-to-face map is affine:
//   x' = -tan(b1) tan(b2) x + ell tan(b2) (tan(b1) + cot(b1))
inline TwoRuleAnalysis two_rule_analysis(double beta1, double beta2, double ell = 1.0) {
  using detail::checked_cot;
  using detail::checked_tan;
  TwoRuleAnalysis a;
  a.beta1 = beta1;
  a.beta2 = beta2;
  const double t1 = checked_tan(beta1, "two_rule_analysis");
  const double t2 = checked_tan(beta2, "two_rule_analysis");
  const double c1 = checked_cot(beta1, "two_rule_analysis");
  a.multiplier = -t1 * t2;
  const double den = 1.0 - a.multiplier;
  if (std::abs(den) < 1e-9) {
    throw DegenerateDenominator("two_rule_analysis: neutral multiplier");
  }
  a.x_fp = ell * t2 * (t1 + c1) / den;
  a.stable = std::abs(a.multiplier) < 1.0;
  return a;
}

struct TwoRuleRun {
  bool completed = false;       // every period closed face -> wall -> wall -> face
  int face_contacts = 0;
  double max_late_error = kInf; // max |impact - x_fp| over the last half of the run
  double final_cart_x = 0.0;
};

// Forward-simulates the one-bit strategy for `periods` periods. Pushing is
// live: each face contact displaces the cart by the world's epsilon.
inline TwoRuleRun simulate_two_rule(double beta1, double beta2, World w, double x0,
                                    int periods) {
  TwoRuleRun out;
  TwoRuleAnalysis a = two_rule_analysis(beta1, beta2, w.params().width);
  Vec2 p{w.blue_x(), x0};
  double h = 0.0;
  std::vector<double> impacts;
  // Start "at the face": apply the face exit rule immediately.
  h = normalize_angle(detail::surface_tangent(SurfaceId::BlueFace) + beta1);
  if (w.params().epsilon > 0.0) w = w.pushed(SurfaceId::BlueFace);
  for (int period = 0; period < periods; ++period) {
    for (int legn = 0; legn < 3; ++legn) {
      auto hit = w.ray_cast({p, h});
      if (!hit) return out;
      p = hit->point;
      switch (legn) {
        case 0:
          if (hit->surface != SurfaceId::TopWall) return out;
          h = normalize_angle(detail::surface_tangent(SurfaceId::TopWall) + beta1);
          break;
        case 1:
          if (hit->surface != SurfaceId::BottomWall) return out;
          h = normalize_angle(detail::surface_tangent(SurfaceId::BottomWall) + beta2);
          break;
        case 2:
          if (hit->surface != SurfaceId::BlueFace) return out;
          ++out.face_contacts;
          impacts.push_back(p.y);
          if (w.params().epsilon > 0.0) {
            w = w.pushed(SurfaceId::BlueFace);
            p.x = w.blue_x();  // pressed flush through the push
          }
          h = normalize_angle(detail::surface_tangent(SurfaceId::BlueFace) + beta1);
          break;
      }
    }
  }
  out.completed = out.face_contacts == periods;
  out.final_cart_x = w.cart_x();
  if (out.completed) {
    out.max_late_error = 0.0;
    for (std::size_t i = impacts.size() / 2; i < impacts.size(); ++i) {
      out.max_late_error = std::max(out.max_late_error, std::abs(impacts[i] - a.x_fp));
    }
  }
  return out;
}

}  // namespace bounce

// Demo: drive the minimal contact-only robot (r3) down the corridor.
//
// Starts the robot at an arbitrary interior pose, runs its bounce-and-push
// policy until the cart has been shoved `goal_count` times, and prints a
// compact stage-by-stage view of the first few bounces plus the final tally.

#include <cstdio>

#include <bounce/policies.hpp>
#include <bounce/primitives.hpp>
#include <bounce/world.hpp>

using namespace bounce;

int main() {
  const World w{WorldParams{}};
  // Facing up-corridor at 135 deg: the first few contact moves zigzag between
  // the walls, the blue probe confirms the face ahead, and the bounce ride
  // settles into the pushing cycle.
  const Pose start{{7.0, 0.35}, 3.0 * kPi / 4.0};

  PolicyConfig cfg;
  cfg.goal_count = 25;  // a short errand instead of the full default schedule

  History h;
  const Outcome out = run_policy(PolicyId::Pi3, RobotSpec::r3(), w, start, cfg, &h);

  std::printf("corridor: %.0f x %.0f, cart center %.1f, push step %.3f\n",
              w.params().length, w.params().width, WorldParams{}.cart_x,
              w.params().epsilon);
  std::printf("robot r3 (rotate / move-to-contact / blue probe), policy pi3\n");
  std::printf("start (%.2f, %.2f) heading %.2f rad, goal: %llu pushes\n\n",
              start.p.x, start.p.y, start.heading,
              static_cast<unsigned long long>(cfg.goal_count));

  std::printf("%5s  %-6s  %8s %7s  %9s  %9s  %5s\n", "stage", "kind", "x", "y",
              "contact", "cart_x", "count");
  std::uint64_t shown = 0, count_so_far = 0;
  for (std::size_t i = 0; i < h.events.size() && shown < 12; ++i) {
    const Event& e = h.events[i];
    if (e.pushed) ++count_so_far;
    if (!is_actuation(e.kind)) continue;
    ++shown;
    std::printf("%5zu  %-6s  %8.3f %7.3f  %9s  %9.3f  %5llu\n", i + 1,
                event_kind_name(e.kind), e.pose_after.p.x, e.pose_after.p.y,
                e.contact ? surface_name(*e.contact) : "-", e.cart_after,
                static_cast<unsigned long long>(count_so_far));
  }

  std::printf("  ...\n\n");
  std::printf("terminal: %s after %llu stages\n", terminal_name(out.terminal),
              static_cast<unsigned long long>(out.stages));
  std::printf("pushes: %llu, cart moved %.2f -> %.2f\n",
              static_cast<unsigned long long>(out.count), WorldParams{}.cart_x,
              out.cart_x);
  return out.success ? 0 : 1;
}

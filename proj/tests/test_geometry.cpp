#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bounce/geometry.hpp"

using namespace bounce;

TEST_CASE("normalize_angle maps into [0, 2pi)") {
  CHECK(normalize_angle(0.0) == 0.0);
  CHECK(normalize_angle(kTwoPi) == 0.0);
  CHECK(normalize_angle(-kTwoPi) == 0.0);
  CHECK_THAT(normalize_angle(-kPi / 2), Catch::Matchers::WithinAbs(3 * kPi / 2, 1e-15));
  CHECK_THAT(normalize_angle(7 * kPi), Catch::Matchers::WithinAbs(kPi, 1e-12));
  for (double a : {-123.456, -0.1, 0.0, 0.1, 5.0, 123.456}) {
    double n = normalize_angle(a);
    CHECK(n >= 0.0);
    CHECK(n < kTwoPi);
    CHECK_THAT(std::remainder(n - a, kTwoPi), Catch::Matchers::WithinAbs(0.0, 1e-9));
  }
}

TEST_CASE("angle_diff returns the signed shortest rotation in (-pi, pi]") {
  CHECK_THAT(angle_diff(0.2, 0.1), Catch::Matchers::WithinAbs(0.1, 1e-15));
  CHECK_THAT(angle_diff(0.1, kTwoPi - 0.1), Catch::Matchers::WithinAbs(0.2, 1e-12));
  CHECK_THAT(angle_diff(kTwoPi - 0.1, 0.1), Catch::Matchers::WithinAbs(-0.2, 1e-12));
  // Antipodal case resolves to +pi, never -pi.
  CHECK_THAT(angle_diff(kPi, 0.0), Catch::Matchers::WithinAbs(kPi, 1e-15));
}

TEST_CASE("pose advance is additive and rotation composes") {
  Pose p{{1.0, 2.0}, 0.7};
  Pose two_steps = p.advanced(0.3).advanced(1.1);
  Pose one_step = p.advanced(1.4);
  CHECK_THAT(two_steps.p.x, Catch::Matchers::WithinAbs(one_step.p.x, 1e-12));
  CHECK_THAT(two_steps.p.y, Catch::Matchers::WithinAbs(one_step.p.y, 1e-12));

  Pose r = p.rotated(1.0).rotated(-2.5);
  CHECK_THAT(r.heading, Catch::Matchers::WithinAbs(normalize_angle(0.7 - 1.5), 1e-12));
  CHECK(r.p == p.p);
}

TEST_CASE("ray-segment intersection: axis-aligned hand case") {
  // Ray from origin along +x against the vertical segment x=2, y in [-1, 1]:
  // t = 2, hit exactly at (2, 0).
  auto hit = ray_segment_intersection({0, 0}, 0.0, {{2, -1}, {2, 1}});
  REQUIRE(hit.has_value());
  CHECK_THAT(hit->t, Catch::Matchers::WithinAbs(2.0, 1e-12));
  CHECK_THAT(hit->point.x, Catch::Matchers::WithinAbs(2.0, 1e-12));
  CHECK_THAT(hit->point.y, Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("ray-segment intersection: diagonal frozen case") {
  // Ray from the origin at 45 degrees against the segment (2,0)-(2,3):
  // distance 2*sqrt(2), hit point (2, 2).
  auto hit = ray_segment_intersection({0, 0}, kPi / 4, {{2, 0}, {2, 3}});
  REQUIRE(hit.has_value());
  CHECK_THAT(hit->t, Catch::Matchers::WithinAbs(2.0 * std::sqrt(2.0), 1e-12));
  CHECK_THAT(hit->point.x, Catch::Matchers::WithinAbs(2.0, 1e-12));
  CHECK_THAT(hit->point.y, Catch::Matchers::WithinAbs(2.0, 1e-12));
}

TEST_CASE("ray-segment intersection rejects misses, parallels, and behind-hits") {
  // Miss: ray passes above the segment.
  CHECK_FALSE(ray_segment_intersection({0, 2}, 0.0, {{2, -1}, {2, 1}}).has_value());
  // Behind: segment on the negative-t side.
  CHECK_FALSE(ray_segment_intersection({0, 0}, 0.0, {{-2, -1}, {-2, 1}}).has_value());
  // Parallel, offset: never intersects.
  CHECK_FALSE(ray_segment_intersection({0, 1}, 0.0, {{1, 0}, {5, 0}}).has_value());
  // Collinear grazing: sliding along the boundary line is not a collision.
  CHECK_FALSE(ray_segment_intersection({0, 0}, 0.0, {{1, 0}, {5, 0}}).has_value());
  // Degenerate zero-length segment.
  CHECK_FALSE(ray_segment_intersection({0, 0}, 0.0, {{2, 0}, {2, 0}}).has_value());
}

TEST_CASE("ray-segment intersection accepts endpoint hits within tie slack") {
  auto hit = ray_segment_intersection({0, 1}, 0.0, {{3, 1}, {3, 5}});
  REQUIRE(hit.has_value());  // grazes the lower endpoint exactly
  CHECK_THAT(hit->t, Catch::Matchers::WithinAbs(3.0, 1e-12));
}

TEST_CASE("intersection distance is consistent with pose advance") {
  Pose p{{0.3, -0.2}, 1.1};
  Segment seg{{2.0, -3.0}, {2.0, 4.0}};
  auto hit = ray_segment_intersection(p.p, p.heading, seg);
  REQUIRE(hit.has_value());
  Pose at = p.advanced(hit->t);
  CHECK_THAT(at.p.x, Catch::Matchers::WithinAbs(hit->point.x, 1e-9));
  CHECK_THAT(at.p.y, Catch::Matchers::WithinAbs(hit->point.y, 1e-9));
}

TEST_CASE("splitmix64 matches the reference sequence and is deterministic") {
  SplitMix64 g(0);
  CHECK(g.next() == 0xe220a8397b1dcdafull);
  CHECK(g.next() == 0x6e789e6aa1b965f4ull);
  CHECK(g.next() == 0x06c45d188009454full);

  SplitMix64 a(12345), b(12345);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

  SplitMix64 u(7);
  for (int i = 0; i < 1000; ++i) {
    double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bounce/world.hpp"

using namespace bounce;
using Catch::Matchers::WithinAbs;

namespace {
World default_world() { return World(WorldParams{}); }
}  // namespace

TEST_CASE("default world layout") {
  World w = default_world();
  CHECK(w.cart_x() == 10.0);
  CHECK_THAT(w.gap(), WithinAbs(0.05, 1e-15));
  CHECK_THAT(w.blue_x(), WithinAbs(9.5, 1e-15));
  CHECK_THAT(w.yellow_x(), WithinAbs(10.5, 1e-15));
  const Segment& blue = w.segment(SurfaceId::BlueFace);
  CHECK_THAT(blue.a.x, WithinAbs(9.5, 1e-15));
  CHECK_THAT(blue.a.y, WithinAbs(0.05, 1e-15));
  CHECK_THAT(blue.b.y, WithinAbs(0.95, 1e-15));
  CHECK_FALSE(w.in_goal());
}

TEST_CASE("ray casts hit the expected surfaces at the expected distances") {
  World w = default_world();

  auto blue = w.ray_cast({{5.0, 0.5}, 0.0});
  REQUIRE(blue.has_value());
  CHECK(blue->surface == SurfaceId::BlueFace);
  CHECK_THAT(blue->distance, WithinAbs(4.5, 1e-12));
  CHECK_THAT(blue->point.y, WithinAbs(0.5, 1e-12));

  auto cap = w.ray_cast({{5.0, 0.5}, kPi});
  REQUIRE(cap.has_value());
  CHECK(cap->surface == SurfaceId::LeftEndCap);
  CHECK_THAT(cap->distance, WithinAbs(5.0, 1e-12));

  auto top = w.ray_cast({{5.0, 0.5}, kPi / 2});
  REQUIRE(top.has_value());
  CHECK(top->surface == SurfaceId::TopWall);
  CHECK_THAT(top->distance, WithinAbs(0.5, 1e-12));

  auto yellow = w.ray_cast({{12.0, 0.5}, kPi});
  REQUIRE(yellow.has_value());
  CHECK(yellow->surface == SurfaceId::YellowFace);
  CHECK_THAT(yellow->distance, WithinAbs(1.5, 1e-12));
}

TEST_CASE("horizontal rays pass through the under-cart gap") {
  World w = default_world();
  // A ray below the cart belly (y=0.05) is parallel to CartBottom and sails
  // under the cart all the way to the right end cap.
  auto h = w.ray_cast({{9.0, 0.025}, 0.0});
  REQUIRE(h.has_value());
  CHECK(h->surface == SurfaceId::RightEndCap);
  CHECK_THAT(h->distance, WithinAbs(11.0, 1e-12));
}

TEST_CASE("corner ties resolve by surface enumeration order") {
  World w = default_world();
  // Aim exactly at the cart's upper-left corner (9.5, 0.95): both BlueFace
  // (id 4) and CartTop (id 6) end there; BlueFace wins the tie.
  Vec2 from{8.5, 0.2};
  double heading = std::atan2(0.95 - 0.2, 9.5 - 8.5);
  auto h = w.ray_cast({from, heading});
  REQUIRE(h.has_value());
  CHECK(h->surface == SurfaceId::BlueFace);
  CHECK_THAT(h->point.x, WithinAbs(9.5, 1e-9));
  CHECK_THAT(h->point.y, WithinAbs(0.95, 1e-9));
}

TEST_CASE("range readings truncate to infinity beyond the horizon") {
  World w = default_world();
  CHECK(w.range_reading({{2.0, 0.5}, 0.0}, 5.0) == kInf);      // blue face 7.5 away
  CHECK_THAT(w.range_reading({{5.0, 0.5}, 0.0}, 5.0), WithinAbs(4.5, 1e-12));
  CHECK(w.first_surface({{2.0, 0.5}, 0.0}, 5.0) == std::nullopt);
  CHECK(w.first_surface({{5.0, 0.5}, 0.0}, 5.0) == SurfaceId::BlueFace);
}

TEST_CASE("invalid poses are rejected") {
  World w = default_world();
  CHECK_THROWS_AS(w.ray_cast({{10.0, 0.5}, 0.0}), InvalidPose);   // inside the cart
  CHECK_THROWS_AS(w.ray_cast({{-1.0, 0.5}, 0.0}), InvalidPose);   // left of the corridor
  CHECK_THROWS_AS(w.ray_cast({{5.0, 1.5}, 0.0}), InvalidPose);    // above the corridor
  CHECK_NOTHROW(w.ray_cast({{9.5, 0.5}, kPi}));                   // flush on the face: free
  CHECK_NOTHROW(w.ray_cast({{5.0, 0.0}, 0.0}));                   // flush on the wall: free
}

TEST_CASE("move_until_contact stops a contact standoff short of the surface") {
  World w = default_world();
  auto r = w.move_until_contact({{5.0, 0.5}, 0.0}, 10.0);
  REQUIRE(r.contact.has_value());
  CHECK(*r.contact == SurfaceId::BlueFace);
  CHECK_THAT(r.traveled, WithinAbs(4.5 - kContactEps, 1e-15));
  CHECK_THAT(r.end.p.x, WithinAbs(9.5 - kContactEps, 1e-12));
  CHECK(w.in_free_space(r.end.p));

  auto short_move = w.move_until_contact({{5.0, 0.5}, 0.0}, 2.0);
  CHECK_FALSE(short_move.contact.has_value());
  CHECK_THAT(short_move.end.p.x, WithinAbs(7.0, 1e-12));

  // Already in contact: zero travel, contact reported.
  Pose flush{{9.5 - 0.5 * kContactEps, 0.5}, 0.0};
  auto again = w.move_until_contact(flush, 3.0);
  REQUIRE(again.contact.has_value());
  CHECK(*again.contact == SurfaceId::BlueFace);
  CHECK(again.traveled == 0.0);
  CHECK(again.end.p.x == flush.p.x);
}

TEST_CASE("pushes displace the cart by epsilon toward the far end and clamp") {
  World w = default_world();
  World after_blue = w.pushed(SurfaceId::BlueFace);
  CHECK_THAT(after_blue.cart_x(), WithinAbs(10.01, 1e-12));
  World after_yellow = w.pushed(SurfaceId::YellowFace);
  CHECK_THAT(after_yellow.cart_x(), WithinAbs(9.99, 1e-12));
  CHECK_THROWS_AS(w.pushed(SurfaceId::TopWall), NotPushable);

  // Pushing only moves the cart; the walls stay put.
  CHECK(after_blue.segment(SurfaceId::TopWall).a.y == 1.0);
  CHECK_THAT(after_blue.blue_x(), WithinAbs(9.51, 1e-12));

  // Clamped at the end of the corridor.
  World near_end(WorldParams{}, 19.495);
  World clamped = near_end.pushed(SurfaceId::BlueFace);
  CHECK_THAT(clamped.cart_x(), WithinAbs(19.5, 1e-12));
  CHECK_THAT(clamped.pushed(SurfaceId::BlueFace).cart_x(), WithinAbs(19.5, 1e-12));
}

TEST_CASE("goal predicate uses the cart's right edge, inclusive") {
  CHECK(World(WorldParams{}, 17.5).in_goal());
  CHECK_FALSE(World(WorldParams{}, 17.499999).in_goal());
}

TEST_CASE("zero-gap and zero-epsilon worlds are legal") {
  WorldParams p;
  p.cart_height = 1.0;  // gap 0: faces span the full corridor height
  p.epsilon = 0.0;
  World w(p);
  CHECK(w.gap() == 0.0);
  CHECK(w.pushed(SurfaceId::BlueFace).cart_x() == w.cart_x());
  auto h = w.ray_cast({{5.0, 0.5}, 0.0});
  REQUIRE(h.has_value());
  CHECK(h->surface == SurfaceId::BlueFace);
}

TEST_CASE("ray cast distance agrees with advancing the pose") {
  World w = default_world();
  SplitMix64 rng(2024);
  int checked = 0;
  while (checked < 200) {
    Pose p{{rng.uniform(0.2, 19.8), rng.uniform(0.02, 0.98)}, rng.uniform(0.0, kTwoPi)};
    if (!w.in_free_space(p.p)) continue;
    auto h = w.ray_cast(p);
    REQUIRE(h.has_value());
    Pose at = p.advanced(h->distance);
    CHECK_THAT(at.p.x, WithinAbs(h->point.x, 1e-9));
    CHECK_THAT(at.p.y, WithinAbs(h->point.y, 1e-9));
    CHECK(h->distance > 0.0);
    ++checked;
  }
}

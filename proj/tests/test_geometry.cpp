#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "tsg/geometry.hpp"

using namespace tsg;

namespace {

constexpr double kPi = std::numbers::pi;

VehicleState rotate(const VehicleState& v, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  return {{c * v.position.x - s * v.position.y, s * v.position.x + c * v.position.y},
          wrap_angle(v.heading + phi), v.speed};
}

double angle_diff(double a, double b) { return std::abs(wrap_angle(a - b)); }

}  // namespace

TEST(WrapAngle, Examples) {
  EXPECT_NEAR(wrap_angle(2.0 * kPi), 0.0, 1e-15);
  EXPECT_EQ(wrap_angle(kPi), kPi);
  EXPECT_NEAR(wrap_angle(kPi + 0.1), -kPi + 0.1, 1e-15);
  EXPECT_NEAR(wrap_angle(-kPi), kPi, 1e-15);
  EXPECT_NEAR(wrap_angle(-3.0 * kPi - 0.25), kPi - 0.25, 1e-14);
}

TEST(WrapAngle, RangeCongruenceAndIdempotence) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e4, 1e4);
  for (int k = 0; k < 20000; ++k) {
    const double th = u(rng);
    const double w = wrap_angle(th);
    ASSERT_GT(w, -kPi);
    ASSERT_LE(w, kPi);
    const double turns = (th - w) / (2.0 * kPi);
    ASSERT_NEAR(turns, std::round(turns), 1e-9);
    ASSERT_EQ(wrap_angle(w), w);
  }
}

TEST(WrapAngle, RejectsNonFinite) {
  EXPECT_THROW(wrap_angle(std::numeric_limits<double>::infinity()), NumericalError);
  EXPECT_THROW(wrap_angle(std::nan("")), NumericalError);
}

TEST(LosAngle, Examples) {
  EXPECT_NEAR(los_angle({0, 0}, {1, 1}), kPi / 4.0, 1e-15);
  EXPECT_NEAR(los_angle({0, 0}, {-1, 0}), kPi, 1e-15);
  EXPECT_NEAR(los_angle({2, 3}, {2, 5}), kPi / 2.0, 1e-15);
  EXPECT_THROW(los_angle({1, 1}, {1, 1}), DegenerateGeometry);
}

TEST(Engagement, TailChase) {
  const auto g = engagement({{0, 0}, 0.0, 25.0}, {{10, 0}, 0.0, 25.0});
  EXPECT_DOUBLE_EQ(g.range, 10.0);
  EXPECT_EQ(g.los, 0.0);
  EXPECT_EQ(g.alpha_t, 0.0);
  EXPECT_EQ(g.alpha_v, 0.0);
}

TEST(Engagement, ChordOnCircle) {
  const double theta = std::asin(0.75);
  // Target at the far end of a 75 m chord, CCW from (0,-50).
  const double phi = -kPi / 2.0 + 2.0 * theta;
  const VehicleState target{{50.0 * std::cos(phi), 50.0 * std::sin(phi)}, wrap_angle(phi + kPi / 2.0), 25.0};
  const VehicleState follower{{0.0, -50.0}, 0.0, 25.0};
  const auto g = engagement(follower, target);
  EXPECT_NEAR(g.range, 75.0, 1e-12);
  EXPECT_NEAR(g.alpha_t, theta, 1e-12);
  EXPECT_NEAR(g.alpha_v, -theta, 1e-12);
  EXPECT_THROW(engagement(follower, follower), DegenerateGeometry);
}

TEST(Engagement, RigidMotionInvariance) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(-100, 100), ang(-kPi, kPi);
  for (int k = 0; k < 2000; ++k) {
    const VehicleState f{{pos(rng), pos(rng)}, ang(rng), 10.0};
    const VehicleState t{{pos(rng), pos(rng)}, ang(rng), 12.0};
    const auto g = engagement(f, t);

    const double phi = ang(rng);
    const auto gr = engagement(rotate(f, phi), rotate(t, phi));
    ASSERT_NEAR(gr.range, g.range, 1e-9);
    ASSERT_LT(angle_diff(gr.alpha_t, g.alpha_t), 1e-9);
    ASSERT_LT(angle_diff(gr.alpha_v, g.alpha_v), 1e-9);
    ASSERT_LT(angle_diff(gr.los, g.los + phi), 1e-9);

    const Vec2 shift{pos(rng), pos(rng)};
    const auto gt = engagement({f.position + shift, f.heading, f.speed}, {t.position + shift, t.heading, t.speed});
    ASSERT_NEAR(gt.range, g.range, 1e-9);
    ASSERT_LT(angle_diff(gt.alpha_t, g.alpha_t), 1e-9);
    ASSERT_LT(angle_diff(gt.alpha_v, g.alpha_v), 1e-9);
    ASSERT_LT(angle_diff(gt.los, g.los), 1e-9);

    const auto mirror = [](const VehicleState& v) {
      return VehicleState{{v.position.x, -v.position.y}, wrap_angle(-v.heading), v.speed};
    };
    const auto gm = engagement(mirror(f), mirror(t));
    ASSERT_EQ(gm.range, g.range);
    ASSERT_LT(angle_diff(gm.los, -g.los), 1e-12);
    ASSERT_LT(angle_diff(gm.alpha_t, -g.alpha_t), 1e-12);
    ASSERT_LT(angle_diff(gm.alpha_v, -g.alpha_v), 1e-12);
  }
}

TEST(PathPoint, Examples) {
  const Path c = Circle{{0, 0}, 50.0, Direction::CCW};
  const auto p0 = path_point(c, 0.0);
  EXPECT_NEAR(p0.position.x, 0.0, 1e-12);
  EXPECT_NEAR(p0.position.y, -50.0, 1e-12);
  EXPECT_NEAR(p0.heading, 0.0, 1e-15);
  const auto p1 = path_point(c, 2.0 * kPi * 50.0);
  EXPECT_NEAR(p1.position.x, p0.position.x, 1e-12);
  EXPECT_NEAR(p1.position.y, p0.position.y, 1e-12);
  EXPECT_LT(angle_diff(p1.heading, p0.heading), 1e-12);

  const auto pl = path_point(Line{{0, 0}, 0.0}, 7.0);
  EXPECT_EQ(pl.position, (Vec2{7.0, 0.0}));
  EXPECT_EQ(pl.heading, 0.0);

  const auto pcw = path_point(Circle{{0, 0}, 50.0, Direction::CW}, 0.0);
  EXPECT_NEAR(pcw.heading, kPi, 1e-15);
}

TEST(PathError, Examples) {
  const Path c = Circle{{0, 0}, 50.0};
  EXPECT_DOUBLE_EQ(path_error(c, {60, 0}), 10.0);
  EXPECT_DOUBLE_EQ(path_error(c, {0, -50}), 0.0);
  EXPECT_DOUBLE_EQ(path_error(Line{{0, 0}, 0.0}, {3, -2}), -2.0);
}

TEST(PathError, ZeroOnPath) {
  const Path paths[] = {Circle{{3, -4}, 50.0, Direction::CCW}, Circle{{0, 0}, 1.0, Direction::CW},
                        Line{{1, 2}, 0.7}, Line{{0, 0}, -2.5}};
  for (const auto& p : paths) {
    for (double s = -500.0; s <= 500.0; s += 0.37) {
      ASSERT_LE(std::abs(path_error(p, path_point(p, s).position)), 1e-12) << s;
    }
  }
}

TEST(Curvature, SignByDirection) {
  EXPECT_DOUBLE_EQ(curvature(Circle{{0, 0}, 50.0, Direction::CCW}), 0.02);
  EXPECT_DOUBLE_EQ(curvature(Circle{{0, 0}, 50.0, Direction::CW}), -0.02);
  EXPECT_EQ(curvature(Line{}), 0.0);
  EXPECT_THROW(validate(Path{Circle{{0, 0}, -1.0}}), DomainError);
}

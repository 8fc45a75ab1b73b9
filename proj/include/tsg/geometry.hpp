#pragma once

#include <cmath>
#include <string>
#include <variant>

#include "tsg/error.hpp"
#include "tsg/scalar.hpp"

namespace tsg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

/// Wraps an angle into (-pi, pi].
///
/// Values already inside the interval are returned unchanged, so the
/// function is idempotent bit-for-bit. Throws NumericalError on non-finite
/// input.
template <class T>
T wrap_angle(T theta) {
  using std::ceil;
  if (!is_finite(theta)) {
    throw NumericalError("wrap_angle: non-finite angle");
  }
  const T half = pi<T>();
  if (theta > -half && theta <= half) {
    return theta;
  }
  const T turn = two_pi<T>();
  T r = theta - turn * T(ceil((theta - half) / turn));
  // Rounding near the seam can land one turn off.
  if (r > half) r -= turn;
  if (r <= -half) r += turn;
  return r;
}

// Planar pose plus forward speed. Heading is CCW from +x.
struct VehicleState {
  Vec2 position;
  double heading = 0.0;  // rad, wrapped to (-pi, pi]
  double speed = 0.0;    // m/s, >= 0
};

enum class Direction { CCW, CW };

struct Circle {
  Vec2 center;
  double radius = 1.0;
  Direction direction = Direction::CCW;
  // Polar angle of the arc-length origin s = 0, measured at the center.
  double phase = -std::numbers::pi / 2.0;
};

struct Line {
  Vec2 origin;
  double heading = 0.0;  // direction of travel
};

using Path = std::variant<Circle, Line>;

struct PathPoint {
  Vec2 position;
  double heading = 0.0;
};

/// Signed curvature: +1/R for a CCW circle, -1/R for CW, 0 for a line.
inline double curvature(const Path& path) {
  if (const auto* c = std::get_if<Circle>(&path)) {
    return c->direction == Direction::CCW ? 1.0 / c->radius : -1.0 / c->radius;
  }
  return 0.0;
}

inline bool is_circle(const Path& path) { return std::holds_alternative<Circle>(path); }

inline void validate(const Path& path) {
  if (const auto* c = std::get_if<Circle>(&path)) {
    if (!(c->radius > 0.0) || !std::isfinite(c->radius)) {
      throw DomainError("circle radius must be positive and finite");
    }
  }
}

inline PathPoint path_point(const Path& path, double s) {
  if (const auto* c = std::get_if<Circle>(&path)) {
    const double sign = c->direction == Direction::CCW ? 1.0 : -1.0;
    const double angle = c->phase + sign * s / c->radius;
    const Vec2 p{c->center.x + c->radius * std::cos(angle),
                 c->center.y + c->radius * std::sin(angle)};
    return {p, wrap_angle(angle + sign * std::numbers::pi / 2.0)};
  }
  const auto& l = std::get<Line>(path);
  return {{l.origin.x + s * std::cos(l.heading), l.origin.y + s * std::sin(l.heading)},
          wrap_angle(l.heading)};
}

/// Signed distance to the path. Circle: positive outside. Line: positive to
/// the left of the direction of travel.
inline double path_error(const Path& path, Vec2 p) {
  if (const auto* c = std::get_if<Circle>(&path)) {
    return norm(p - c->center) - c->radius;
  }
  const auto& l = std::get<Line>(path);
  const Vec2 r = p - l.origin;
  return std::cos(l.heading) * r.y - std::sin(l.heading) * r.x;
}

inline double los_angle(Vec2 from, Vec2 to) {
  const Vec2 r = to - from;
  if (r.x == 0.0 && r.y == 0.0) {
    throw DegenerateGeometry("line of sight undefined: points coincide");
  }
  return wrap_angle(std::atan2(r.y, r.x));
}

// Relative coordinates of a follower with respect to its target.
// alpha_t = wrap(gamma_t - lambda), alpha_v = wrap(gamma_v - lambda).
struct EngagementGeometry {
  double range = 0.0;      // d
  double los = 0.0;        // lambda
  double alpha_t = 0.0;
  double alpha_v = 0.0;
};

inline EngagementGeometry engagement(const VehicleState& follower, const VehicleState& target) {
  const Vec2 r = target.position - follower.position;
  if (r.x == 0.0 && r.y == 0.0) {
    throw DegenerateGeometry("engagement undefined: follower and target coincide");
  }
  const double los = wrap_angle(std::atan2(r.y, r.x));
  return {norm(r), los, wrap_angle(target.heading - los), wrap_angle(follower.heading - los)};
}

}  // namespace tsg

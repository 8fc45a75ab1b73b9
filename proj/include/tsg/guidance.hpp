#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include "tsg/error.hpp"
#include "tsg/geometry.hpp"
#include "tsg/scalar.hpp"

namespace tsg {

enum class GuidanceLaw { Regular, Sine };

inline std::string_view to_string(GuidanceLaw law) {
  return law == GuidanceLaw::Regular ? "regular" : "sine";
}

struct GuidanceParams {
  double d_star = 75.0;  // desired separation [m]
  double k_v = 0.5;      // speed loop gain [1/s]
  double V_c = 25.0;     // commanded platoon speed [m/s]

  double speed_cap() const { return 3.0 * V_c; }
};

// Range floor applied inside every law that divides by d.
inline constexpr double kMinRange = 1e-3;

inline void validate(const GuidanceParams& p) {
  if (!(p.d_star > 0.0) || !std::isfinite(p.d_star)) throw DomainError("d_star must be positive");
  if (!(p.k_v > 0.0) || !std::isfinite(p.k_v)) throw DomainError("k_v must be positive");
  if (!(p.V_c > 0.0) || !std::isfinite(p.V_c)) throw DomainError("V_c must be positive");
}

/// Throws DomainError unless a chord of length d* exists on a circle of
/// radius R, i.e. d* < 2R.
inline void require_chord(double d_star, double radius) {
  if (!(d_star < 2.0 * radius)) {
    throw DomainError("d_star must satisfy d_star < 2R (chord longer than diameter): d_star=" +
                      std::to_string(d_star) + ", R=" + std::to_string(radius));
  }
}

/// Lateral acceleration command of the trajectory-shaping laws.
///
///   Regular: a = (V^2/d) (-4 alpha_v - 2 alpha_t), angles wrapped first
///   Sine:    a = (V^2/d) (-4 sin alpha_v - 2 sin alpha_t)
///
/// With alpha measured as heading minus line of sight, the sine form makes
/// the on-circle chord configuration an exact equilibrium.
template <class T>
T lateral_accel(GuidanceLaw law, T range, T alpha_t, T alpha_v, T speed) {
  using std::max;
  using std::sin;
  const T d = max(range, T(kMinRange));
  const T gain = speed * speed / d;
  if (law == GuidanceLaw::Sine) {
    return gain * (T(-4) * sin(alpha_v) - T(2) * sin(alpha_t));
  }
  return gain * (T(-4) * wrap_angle(alpha_v) - T(2) * wrap_angle(alpha_t));
}

inline double lateral_accel(GuidanceLaw law, const EngagementGeometry& g, double speed) {
  return lateral_accel<double>(law, g.range, g.alpha_t, g.alpha_v, speed);
}

/// Speed of the target that slows down when the follower lags and matches
/// the follower at d = d*: V_t = V d*/d, clamped to [0, cap].
template <class T>
T virtual_target_speed(T follower_speed, T range, T d_star, T cap) {
  using std::max;
  using std::min;
  const T d = max(range, T(kMinRange));
  return min(max(follower_speed * d_star / d, T(0)), cap);
}

/// Longitudinal command chain. Index 0 is the lead vehicle; gaps[i] is the
/// range from vehicle i to its predecessor (gaps[0] to the virtual target).
/// The last vehicle tracks V_c; every other vehicle i tracks its follower's
/// speed scaled by the follower's gap, V[i+1] d*/gaps[i+1].
inline std::vector<double> chain_speed_commands(std::span<const VehicleState> platoon,
                                                std::span<const double> gaps,
                                                const GuidanceParams& params) {
  if (platoon.empty()) throw DomainError("chain_speed_commands: empty platoon");
  if (gaps.size() != platoon.size()) {
    throw DomainError("chain_speed_commands: one gap per vehicle required");
  }
  const std::size_t n = platoon.size();
  std::vector<double> cmd(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    cmd[i] = virtual_target_speed(platoon[i + 1].speed, gaps[i + 1], params.d_star,
                                  params.speed_cap());
  }
  cmd[n - 1] = params.V_c;
  return cmd;
}

/// Lateral acceleration of the path-bound virtual target: V_t^2 * curvature.
inline double lead_target_accel(double target_speed, const Path& path) {
  return target_speed * target_speed * curvature(path);
}

struct WheelSpeeds {
  double right = 0.0;
  double left = 0.0;
};

// Differential-drive mapping: turn radius R_t = V^2/a, then
// v_r = V (1 + W/(2 R_t)), v_l = V (1 - W/(2 R_t)). W/(2 R_t) is formed as
// W a / (2 V^2) so a = 0 needs no special case. The slower wheel is taken as
// 2V minus the faster one, which is exact while |W/(2 R_t)| <= 3 and keeps
// the mean equal to V bit-for-bit.
inline WheelSpeeds wheel_speeds(double speed, double accel, double track_width) {
  if (!(speed > 0.0)) throw DomainError("wheel_speeds: speed must be positive");
  if (!(track_width > 0.0)) throw DomainError("wheel_speeds: track width must be positive");
  const double k = track_width * accel / (2.0 * speed * speed);
  const double fast = speed + speed * std::abs(k);
  const double slow = 2.0 * speed - fast;
  return accel >= 0.0 ? WheelSpeeds{fast, slow} : WheelSpeeds{slow, fast};
}

}  // namespace tsg

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "tsg/error.hpp"
#include "tsg/guidance.hpp"
#include "tsg/scalar.hpp"

namespace tsg {

// Relative state of a platoon: for each vehicle i (0 = lead) the entries
// [4i .. 4i+3] hold gap d_i to its predecessor, alpha_t_i, alpha_v_i and
// speed V_i. The lead's predecessor is the virtual target.
template <class T>
using RelativeState = std::vector<T>;

enum RelativeIndex : std::size_t { kGap = 0, kAlphaT = 1, kAlphaV = 2, kSpeed = 3 };

inline constexpr std::size_t kStatesPerVehicle = 4;

// Path curvature (1/R, 0 for a line) and commanded speed of the last vehicle.
template <class T>
struct ControlInput {
  T curvature = T(0);
  T V_c = T(1);
};

// Speeds below this fraction of V_c are floored wherever the model divides
// by a speed.
inline constexpr double kSpeedFloorFraction = 0.01;

/// Relative-coordinate platoon dynamics.
///
/// For vehicle i with predecessor i-1 (index -1 is the virtual target, with
/// V_0 = V_1 d*/d_1 and turn rate V_0 * curvature):
///
///   d'       = V_{i-1} cos alpha_t - V_i cos alpha_v
///   lambda'  = (V_{i-1} sin alpha_t - V_i sin alpha_v) / d
///   alpha_t' = a_{i-1}/V_{i-1} - lambda'
///   alpha_v' = a_i/V_i - lambda'
///   V'       = k_v (V_cmd_i - V_i)
///
/// a_i comes from lateral_accel and V_cmd from the same command chain the
/// Cartesian simulator uses.
template <class T>
std::vector<T> rhs_relative(std::span<const T> x, const ControlInput<T>& u, GuidanceLaw law,
                            const GuidanceParams& params) {
  using std::cos;
  using std::max;
  using std::sin;
  if (x.empty() || x.size() % kStatesPerVehicle != 0) {
    throw DomainError("rhs_relative: state length must be a positive multiple of 4");
  }
  const std::size_t n = x.size() / kStatesPerVehicle;
  const T d_star(params.d_star);
  const T k_v(params.k_v);
  const T cap = T(3) * u.V_c;
  const T v_floor = T(kSpeedFloorFraction) * u.V_c;
  const T d_min(kMinRange);

  auto gap = [&](std::size_t i) { return x[kStatesPerVehicle * i + kGap]; };
  auto at = [&](std::size_t i) { return x[kStatesPerVehicle * i + kAlphaT]; };
  auto av = [&](std::size_t i) { return x[kStatesPerVehicle * i + kAlphaV]; };
  auto speed = [&](std::size_t i) { return x[kStatesPerVehicle * i + kSpeed]; };
  auto turn_rate = [&](std::size_t i) {
    return lateral_accel<T>(law, gap(i), at(i), av(i), speed(i)) / max(speed(i), v_floor);
  };

  const T target_speed = virtual_target_speed<T>(speed(0), gap(0), d_star, cap);

  std::vector<T> dx(x.size());
  T pred_turn_rate = target_speed * u.curvature;
  T pred_speed = target_speed;
  for (std::size_t i = 0; i < n; ++i) {
    const T d = max(gap(i), d_min);
    const T v = speed(i);
    const T los_rate = (pred_speed * sin(at(i)) - v * sin(av(i))) / d;
    const T own_turn_rate = turn_rate(i);
    const T v_cmd =
        i + 1 < n ? virtual_target_speed<T>(speed(i + 1), gap(i + 1), d_star, cap) : u.V_c;
    T* out = dx.data() + kStatesPerVehicle * i;
    out[kGap] = pred_speed * cos(at(i)) - v * cos(av(i));
    out[kAlphaT] = pred_turn_rate - los_rate;
    out[kAlphaV] = own_turn_rate - los_rate;
    out[kSpeed] = k_v * (v_cmd - v);
    pred_turn_rate = own_turn_rate;
    pred_speed = v;
  }
  return dx;
}

template <class T>
std::vector<T> rhs_relative(const std::vector<T>& x, const ControlInput<T>& u, GuidanceLaw law,
                            const GuidanceParams& params) {
  return rhs_relative<T>(std::span<const T>(x), u, law, params);
}

/// On-path equilibrium: every vehicle at gap d*, alpha_t = asin(d*/2R),
/// alpha_v = -alpha_t, speed V_c. radius = +inf gives the straight-line
/// equilibrium. Throws DomainError unless d* < 2R.
template <class T = double>
RelativeState<T> equilibrium_state(std::size_t n, const GuidanceParams& params, double radius) {
  using std::asin;
  validate(params);
  if (n == 0) throw DomainError("equilibrium_state: platoon must have at least one vehicle");
  if (!(radius > 0.0)) throw DomainError("equilibrium_state: radius must be positive");
  require_chord(params.d_star, radius);
  const T ratio = std::isinf(radius) ? T(0) : T(params.d_star) / (T(2) * T(radius));
  const T theta = asin(ratio);
  RelativeState<T> x(kStatesPerVehicle * n);
  for (std::size_t i = 0; i < n; ++i) {
    x[kStatesPerVehicle * i + kGap] = T(params.d_star);
    x[kStatesPerVehicle * i + kAlphaT] = theta;
    x[kStatesPerVehicle * i + kAlphaV] = -theta;
    x[kStatesPerVehicle * i + kSpeed] = T(params.V_c);
  }
  return x;
}

// Control input for a circle of signed radius (or a line when radius is inf).
template <class T = double>
ControlInput<T> control_input(const GuidanceParams& params, double radius) {
  return {std::isinf(radius) ? T(0) : T(1) / T(radius), T(params.V_c)};
}

}  // namespace tsg

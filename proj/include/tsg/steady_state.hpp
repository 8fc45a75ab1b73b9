#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tsg/error.hpp"
#include "tsg/guidance.hpp"
#include "tsg/relative_dynamics.hpp"

namespace tsg {

struct SteadyVehicle {
  double gap = 0.0;
  double alpha_t = 0.0;
  double alpha_v = 0.0;
  double speed = 0.0;
  double radius = 0.0;         // radius of the circle the vehicle settles on
  double radius_offset = 0.0;  // radius - R; negative means inside the path
};

struct SteadyState {
  std::vector<SteadyVehicle> vehicles;
  bool from_simulation = false;  // Newton failed; values come from integration
  std::string note;
};

namespace detail {

using Vec3 = std::array<double, 3>;

// Steady-turn conditions for one follower whose predecessor circles at
// curvature kappa. Unknowns (d, alpha_t, alpha_v); the common angular rate
// and the speed ratio V_i/V_{i-1} = d/d* are eliminated.
inline Vec3 steady_residual(GuidanceLaw law, const Vec3& z, double kappa, double d_star) {
  const double d = z[0], at = z[1], av = z[2];
  const double q = d / d_star;
  const double shaping = law == GuidanceLaw::Sine ? -4.0 * std::sin(av) - 2.0 * std::sin(at)
                                                  : -4.0 * wrap_angle(av) - 2.0 * wrap_angle(at);
  return {std::cos(at) - q * std::cos(av),
          d_star * ((std::sin(at) - q * std::sin(av)) / d - kappa),
          shaping - d_star * kappa};
}

inline double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

inline bool solve3(std::array<Vec3, 3> a, Vec3 b, Vec3& x) {
  for (int k = 0; k < 3; ++k) {
    int p = k;
    for (int i = k + 1; i < 3; ++i)
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    if (a[p][k] == 0.0) return false;
    std::swap(a[p], a[k]);
    std::swap(b[p], b[k]);
    for (int i = k + 1; i < 3; ++i) {
      const double f = a[i][k] / a[k][k];
      for (int j = k; j < 3; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  for (int i = 2; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < 3; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return true;
}

// Damped Newton from the sine-law chord geometry. Returns false on failure.
inline bool newton_follower(GuidanceLaw law, double kappa, double d_star, Vec3& z) {
  const double s = d_star * kappa / 2.0;
  if (!(std::abs(s) < 1.0)) return false;
  z = {d_star, std::asin(s), -std::asin(s)};
  Vec3 f = steady_residual(law, z, kappa, d_star);
  for (int it = 0; it < 100; ++it) {
    if (norm3(f) < 1e-14) return true;
    std::array<Vec3, 3> jac{};
    for (int j = 0; j < 3; ++j) {
      const double h = 1e-7 * std::max(1.0, std::abs(z[j]));
      Vec3 zp = z, zm = z;
      zp[j] += h;
      zm[j] -= h;
      const Vec3 fp = steady_residual(law, zp, kappa, d_star);
      const Vec3 fm = steady_residual(law, zm, kappa, d_star);
      for (int i = 0; i < 3; ++i) jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
    }
    Vec3 step{};
    if (!solve3(jac, {-f[0], -f[1], -f[2]}, step)) return false;
    double t = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
      const Vec3 zt{z[0] + t * step[0], z[1] + t * step[1], z[2] + t * step[2]};
      if (!(zt[0] > 0.0)) continue;
      const Vec3 ft = steady_residual(law, zt, kappa, d_star);
      if (norm3(ft) < norm3(f)) {
        z = zt;
        f = ft;
        improved = true;
        break;
      }
    }
    if (!improved) return norm3(f) < 1e-11;
  }
  return norm3(f) < 1e-11;
}

}  // namespace detail

/// Integrates the relative dynamics from the on-path equilibrium with RK4
/// and reads the steady turn off the terminal state. Throws NumericalError
/// if the terminal state is not stationary.
inline SteadyState steady_state_by_simulation(GuidanceLaw law, std::size_t n, const GuidanceParams& p,
                                              double radius, double horizon_in_time_constants = 600.0) {
  auto x = equilibrium_state<double>(n, p, radius);
  const auto u = control_input<double>(p, radius);
  const double tau = p.d_star / p.V_c;
  const double dt = 0.01 * tau;
  const auto steps = static_cast<long>(horizon_in_time_constants / 0.01);
  auto f = [&](const std::vector<double>& y) { return rhs_relative<double>(y, u, law, p); };
  std::vector<double> tmp(x.size());
  for (long s = 0; s < steps; ++s) {
    const auto k1 = f(x);
    for (std::size_t i = 0; i < x.size(); ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    const auto k2 = f(tmp);
    for (std::size_t i = 0; i < x.size(); ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    const auto k3 = f(tmp);
    for (std::size_t i = 0; i < x.size(); ++i) tmp[i] = x[i] + dt * k3[i];
    const auto k4 = f(tmp);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  double res = 0.0;
  for (double v : f(x)) res = std::max(res, std::abs(v));
  if (!(res < 1e-8 * p.V_c / tau)) {
    throw NumericalError("steady_state_by_simulation: no stationary state reached (residual " +
                         std::to_string(res) + ")");
  }
  SteadyState out;
  out.from_simulation = true;
  const double v0 = virtual_target_speed(x[kSpeed], x[kGap], p.d_star, p.speed_cap());
  for (std::size_t i = 0; i < n; ++i) {
    SteadyVehicle v;
    v.gap = x[4 * i + kGap];
    v.alpha_t = x[4 * i + kAlphaT];
    v.alpha_v = x[4 * i + kAlphaV];
    v.speed = x[4 * i + kSpeed];
    v.radius = std::isinf(radius) ? radius : radius * v.speed / v0;
    v.radius_offset = std::isinf(radius) ? 0.0 : v.radius - radius;
    out.vehicles.push_back(v);
  }
  return out;
}

/// Steady turn of every vehicle in the platoon, solved vehicle by vehicle
/// down the chain: each follower circles the common center at curvature
/// kappa_i = kappa_{i-1} d*/d_i. Falls back to steady_state_by_simulation
/// (flagged) if Newton fails for any vehicle.
inline SteadyState steady_state(GuidanceLaw law, std::size_t n, const GuidanceParams& p, double radius) {
  validate(p);
  if (n == 0) throw DomainError("steady_state: n must be >= 1");
  if (!(radius > 0.0)) throw DomainError("steady_state: radius must be positive");
  require_chord(p.d_star, radius);
  SteadyState out;
  double kappa = std::isinf(radius) ? 0.0 : 1.0 / radius;
  double speed_ratio = 1.0;  // V_i / V_0
  std::vector<double> ratios;
  for (std::size_t i = 0; i < n; ++i) {
    detail::Vec3 z{};
    if (!detail::newton_follower(law, kappa, p.d_star, z)) {
      auto sim = steady_state_by_simulation(law, n, p, radius);
      sim.note = "Newton failed at vehicle " + std::to_string(i + 1) + "; simulated instead";
      return sim;
    }
    const double q = z[0] / p.d_star;
    speed_ratio *= q;
    kappa /= q;
    SteadyVehicle v;
    v.gap = z[0];
    v.alpha_t = z[1];
    v.alpha_v = z[2];
    v.radius = kappa == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / kappa;
    v.radius_offset = kappa == 0.0 ? 0.0 : v.radius - radius;
    ratios.push_back(speed_ratio);
    out.vehicles.push_back(v);
  }
  // The last vehicle runs at V_c; that fixes the absolute speeds.
  const double v0 = p.V_c / speed_ratio;
  for (std::size_t i = 0; i < n; ++i) out.vehicles[i].speed = v0 * ratios[i];
  return out;
}

inline SteadyState steady_state_regular(std::size_t n, const GuidanceParams& p, double radius) {
  return steady_state(GuidanceLaw::Regular, n, p, radius);
}

}  // namespace tsg

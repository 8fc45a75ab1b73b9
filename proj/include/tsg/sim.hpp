#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "tsg/error.hpp"
#include "tsg/geometry.hpp"
#include "tsg/guidance.hpp"
#include "tsg/relative_dynamics.hpp"

namespace tsg {

struct Disturbance {
  enum class Kind { LateralAccel, Velocity };

  std::size_t vehicle = 1;  // 1-based, 1 = lead
  Kind kind = Kind::LateralAccel;
  double magnitude = 0.0;   // m/s^2 or m/s
  double t_start = 0.0;
  double duration = 1.0;

  bool active(double t) const { return t >= t_start && t < t_start + duration; }
};

// Vehicles on the path at chord spacing d* behind the virtual target,
// tangent headings, speed V_c.
struct EquilibriumStart {};

// Equilibrium start with every vehicle displaced by dr (outward for a
// circle, to the left for a line) and its heading rotated by dgamma.
struct OffsetStart {
  double dr = 0.0;
  double dgamma = 0.0;
};

using InitialCondition = std::variant<EquilibriumStart, OffsetStart, std::vector<VehicleState>>;

struct Scenario {
  Path path = Circle{};
  std::size_t n = 1;
  GuidanceLaw law = GuidanceLaw::Sine;
  GuidanceParams params;
  InitialCondition initial = EquilibriumStart{};
  std::vector<Disturbance> disturbances;
  double dt = 0.01;
  double t_final = 100.0;
  std::optional<double> track_width;  // differential-drive emulation when set
  std::size_t log_decimation = 10;

  double speed_floor() const { return kSpeedFloorFraction * params.V_c; }
};

/// Checks every scenario invariant; throws ScenarioError naming the field.
inline void validate(const Scenario& sc) {
  auto fail = [](const std::string& field, const std::string& what) {
    throw ScenarioError(field + ": " + what);
  };
  if (const auto* c = std::get_if<Circle>(&sc.path)) {
    if (!(c->radius > 0.0) || !std::isfinite(c->radius)) fail("path.radius", "must be positive and finite");
    if (!(sc.params.d_star < 2.0 * c->radius)) {
      fail("d_star", "must satisfy d_star < 2R (got d_star=" + std::to_string(sc.params.d_star) +
                         ", R=" + std::to_string(c->radius) + ")");
    }
  }
  if (sc.n < 1) fail("n", "must be >= 1");
  if (!(sc.params.d_star > 0.0)) fail("d_star", "must be > 0");
  if (!(sc.params.k_v > 0.0)) fail("k_v", "must be > 0");
  if (!(sc.params.V_c > 0.0)) fail("V_c", "must be > 0");
  if (!(sc.dt > 0.0)) fail("dt", "must be > 0");
  if (!(sc.t_final > sc.dt)) fail("t_final", "must exceed dt");
  if (sc.log_decimation < 1) fail("log_decimation", "must be >= 1");
  if (sc.track_width && !(*sc.track_width > 0.0)) fail("track_width", "must be > 0");
  if (const auto* list = std::get_if<std::vector<VehicleState>>(&sc.initial)) {
    if (list->size() != sc.n) fail("initial", "explicit list must have exactly n entries");
    for (std::size_t i = 0; i < list->size(); ++i) {
      const auto& v = (*list)[i];
      if (!(v.speed >= 0.0)) fail("initial[" + std::to_string(i) + "].V", "must be >= 0");
      if (!std::isfinite(v.position.x) || !std::isfinite(v.position.y) || !std::isfinite(v.heading)) {
        fail("initial[" + std::to_string(i) + "]", "pose must be finite");
      }
    }
  }
  for (std::size_t k = 0; k < sc.disturbances.size(); ++k) {
    const auto& d = sc.disturbances[k];
    const std::string field = "disturbances[" + std::to_string(k) + "]";
    if (d.vehicle < 1 || d.vehicle > sc.n) {
      fail(field + ".vehicle", "index " + std::to_string(d.vehicle) + " out of range 1.." + std::to_string(sc.n));
    }
    if (!(d.duration > 0.0)) fail(field + ".duration", "must be > 0");
  }
}

// Time-indexed state of the whole platoon. vehicles[0] is the lead.
struct PlatoonState {
  double t = 0.0;
  double target_arclength = 0.0;
  double target_speed = 0.0;
  std::vector<VehicleState> vehicles;
};

/// Resolves the scenario's initial condition. The virtual target starts at
/// arc length 0.
inline PlatoonState initial_state(const Scenario& sc) {
  validate(sc);
  PlatoonState st;
  if (const auto* list = std::get_if<std::vector<VehicleState>>(&sc.initial)) {
    st.vehicles = *list;
    for (auto& v : st.vehicles) v.heading = wrap_angle(v.heading);
  } else {
    const double d = sc.params.d_star;
    double spacing = d;
    if (const auto* c = std::get_if<Circle>(&sc.path)) {
      spacing = 2.0 * c->radius * std::asin(d / (2.0 * c->radius));
    }
    const auto* off = std::get_if<OffsetStart>(&sc.initial);
    for (std::size_t i = 0; i < sc.n; ++i) {
      const PathPoint pp = path_point(sc.path, -static_cast<double>(i + 1) * spacing);
      VehicleState v{pp.position, pp.heading, sc.params.V_c};
      if (off) {
        Vec2 normal;
        if (const auto* c = std::get_if<Circle>(&sc.path)) {
          const Vec2 r = pp.position - c->center;
          normal = (1.0 / norm(r)) * r;
        } else {
          const double h = std::get<Line>(sc.path).heading;
          normal = {-std::sin(h), std::cos(h)};
        }
        v.position = v.position + off->dr * normal;
        v.heading = wrap_angle(v.heading + off->dgamma);
      }
      st.vehicles.push_back(v);
    }
  }
  const PathPoint tp = path_point(sc.path, 0.0);
  const double d1 = norm(tp.position - st.vehicles.front().position);
  st.target_speed = virtual_target_speed(st.vehicles.front().speed, d1, sc.params.d_star, sc.params.speed_cap());
  return st;
}

// Guidance quantities of one vehicle at one instant.
struct VehicleCommand {
  EngagementGeometry geometry;  // with respect to the predecessor
  double accel = 0.0;           // guidance lateral acceleration command
  double speed_cmd = 0.0;
};

struct PlatoonCommands {
  VehicleState target;  // virtual target
  std::vector<VehicleCommand> vehicles;
};

/// Evaluates the guidance of every vehicle. Vehicle i pursues vehicle i-1
/// (the lead pursues the virtual target). Throws DegenerateGeometry naming
/// the pair if two consecutive members coincide.
inline PlatoonCommands evaluate_commands(const PlatoonState& st, const Scenario& sc) {
  const std::size_t n = st.vehicles.size();
  PlatoonCommands out;
  const PathPoint tp = path_point(sc.path, st.target_arclength);
  out.target = {tp.position, tp.heading, 0.0};
  out.vehicles.resize(n);
  std::vector<double> gaps(n);
  for (std::size_t i = 0; i < n; ++i) {
    const VehicleState& pred = i == 0 ? out.target : st.vehicles[i - 1];
    try {
      out.vehicles[i].geometry = engagement(st.vehicles[i], pred);
    } catch (const DegenerateGeometry&) {
      throw DegenerateGeometry("vehicle " + std::to_string(i + 1) + " coincides with " +
                               (i == 0 ? std::string("the virtual target")
                                       : "vehicle " + std::to_string(i)) +
                               " at t=" + std::to_string(st.t));
    }
    gaps[i] = out.vehicles[i].geometry.range;
  }
  out.target.speed = virtual_target_speed(st.vehicles[0].speed, gaps[0], sc.params.d_star, sc.params.speed_cap());
  const auto cmds = chain_speed_commands(st.vehicles, gaps, sc.params);
  for (std::size_t i = 0; i < n; ++i) {
    out.vehicles[i].accel = lateral_accel(sc.law, out.vehicles[i].geometry, st.vehicles[i].speed);
    out.vehicles[i].speed_cmd = cmds[i];
  }
  return out;
}

struct VehicleRate {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double speed = 0.0;
};

struct PlatoonRate {
  double target_arclength = 0.0;
  std::vector<VehicleRate> vehicles;
};

/// Time derivative of the Cartesian platoon state at st.t, disturbances
/// included. LateralAccel adds to the applied lateral acceleration;
/// Velocity adds to the speed driving the position kinematics only. Throws
/// NumericalError naming the time and vehicle if a rate is not finite.
inline PlatoonRate derivatives(const PlatoonState& st, const Scenario& sc) {
  const PlatoonCommands cmd = evaluate_commands(st, sc);
  const std::size_t n = st.vehicles.size();
  PlatoonRate rate;
  rate.target_arclength = cmd.target.speed;
  rate.vehicles.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const VehicleState& v = st.vehicles[i];
    double accel = cmd.vehicles[i].accel;
    double speed = v.speed;
    for (const auto& d : sc.disturbances) {
      if (d.vehicle != i + 1 || !d.active(st.t)) continue;
      if (d.kind == Disturbance::Kind::LateralAccel) {
        accel += d.magnitude;
      } else {
        speed += d.magnitude;
      }
    }
    const double turn_speed = std::max(v.speed, sc.speed_floor());
    double turn_rate = accel / turn_speed;
    if (sc.track_width) {
      const WheelSpeeds w = wheel_speeds(turn_speed, accel, *sc.track_width);
      turn_rate = (w.right - w.left) / *sc.track_width;
    }
    const VehicleRate r{speed * std::cos(v.heading), speed * std::sin(v.heading), turn_rate,
                        sc.params.k_v * (cmd.vehicles[i].speed_cmd - v.speed)};
    if (!std::isfinite(r.x) || !std::isfinite(r.y) || !std::isfinite(r.heading) || !std::isfinite(r.speed)) {
      throw NumericalError("non-finite rate at t=" + std::to_string(st.t) + " for vehicle " +
                           std::to_string(i + 1));
    }
    rate.vehicles[i] = r;
  }
  return rate;
}

namespace detail {

inline PlatoonState advance(const PlatoonState& st, const PlatoonRate& r, double h) {
  PlatoonState out = st;
  out.t = st.t + h;
  out.target_arclength += h * r.target_arclength;
  for (std::size_t i = 0; i < out.vehicles.size(); ++i) {
    auto& v = out.vehicles[i];
    v.position.x += h * r.vehicles[i].x;
    v.position.y += h * r.vehicles[i].y;
    v.heading += h * r.vehicles[i].heading;
    v.speed += h * r.vehicles[i].speed;
  }
  return out;
}

}  // namespace detail

/// One classical RK4 step of size dt. Headings are wrapped and speeds
/// floored afterwards. Throws NumericalError naming the time and vehicle if
/// the result is not finite.
inline PlatoonState step(const PlatoonState& st, const Scenario& sc, double dt) {
  const PlatoonRate k1 = derivatives(st, sc);
  const PlatoonRate k2 = derivatives(detail::advance(st, k1, 0.5 * dt), sc);
  const PlatoonRate k3 = derivatives(detail::advance(st, k2, 0.5 * dt), sc);
  const PlatoonRate k4 = derivatives(detail::advance(st, k3, dt), sc);
  PlatoonState out = st;
  out.t = st.t + dt;
  const double w = dt / 6.0;
  out.target_arclength += w * (k1.target_arclength + 2.0 * k2.target_arclength +
                               2.0 * k3.target_arclength + k4.target_arclength);
  for (std::size_t i = 0; i < out.vehicles.size(); ++i) {
    auto& v = out.vehicles[i];
    const auto& a = k1.vehicles[i];
    const auto& b = k2.vehicles[i];
    const auto& c = k3.vehicles[i];
    const auto& d = k4.vehicles[i];
    v.position.x += w * (a.x + 2.0 * b.x + 2.0 * c.x + d.x);
    v.position.y += w * (a.y + 2.0 * b.y + 2.0 * c.y + d.y);
    v.heading += w * (a.heading + 2.0 * b.heading + 2.0 * c.heading + d.heading);
    v.speed += w * (a.speed + 2.0 * b.speed + 2.0 * c.speed + d.speed);
    if (!std::isfinite(v.position.x) || !std::isfinite(v.position.y) || !std::isfinite(v.heading) ||
        !std::isfinite(v.speed)) {
      throw NumericalError("non-finite state at t=" + std::to_string(out.t) + " for vehicle " +
                           std::to_string(i + 1));
    }
    v.heading = wrap_angle(v.heading);
    v.speed = std::max(v.speed, sc.speed_floor());
  }
  if (!std::isfinite(out.target_arclength)) {
    throw NumericalError("non-finite virtual target position at t=" + std::to_string(out.t));
  }
  out.target_speed = virtual_target_speed(out.vehicles[0].speed,
                                          norm(path_point(sc.path, out.target_arclength).position -
                                               out.vehicles[0].position),
                                          sc.params.d_star, sc.params.speed_cap());
  return out;
}

struct TrajectoryRecord {
  double t = 0.0;
  std::size_t vehicle = 1;  // 1-based
  double x = 0.0;
  double y = 0.0;
  double gamma = 0.0;
  double V = 0.0;
  double d = 0.0;
  double alpha_t = 0.0;
  double alpha_v = 0.0;
  double a_cmd = 0.0;
  double V_cmd = 0.0;
  double path_err = 0.0;
  double gap_err = 0.0;
  double vel_err = 0.0;

  friend bool operator==(const TrajectoryRecord&, const TrajectoryRecord&) = default;
};

struct TrajectoryLog {
  std::size_t n = 0;
  std::vector<TrajectoryRecord> records;  // n records per logged instant
};

inline void append_records(TrajectoryLog& log, const PlatoonState& st, const Scenario& sc) {
  const PlatoonCommands cmd = evaluate_commands(st, sc);
  for (std::size_t i = 0; i < st.vehicles.size(); ++i) {
    const auto& v = st.vehicles[i];
    const auto& c = cmd.vehicles[i];
    log.records.push_back({st.t, i + 1, v.position.x, v.position.y, v.heading, v.speed,
                           c.geometry.range, c.geometry.alpha_t, c.geometry.alpha_v, c.accel,
                           c.speed_cmd, path_error(sc.path, v.position),
                           c.geometry.range - sc.params.d_star, v.speed - sc.params.V_c});
  }
}

/// Integrates from t = 0 to t_final with fixed step dt, logging every
/// log_decimation steps and at the final step.
inline TrajectoryLog run(const Scenario& sc) {
  validate(sc);
  PlatoonState st = initial_state(sc);
  TrajectoryLog log;
  log.n = sc.n;
  const auto steps = static_cast<long long>(std::llround(sc.t_final / sc.dt));
  append_records(log, st, sc);
  for (long long k = 1; k <= steps; ++k) {
    st = step(st, sc, sc.dt);
    // Keep t on the grid instead of accumulating dt.
    st.t = static_cast<double>(k) * sc.dt;
    if (k % static_cast<long long>(sc.log_decimation) == 0 || k == steps) append_records(log, st, sc);
  }
  return log;
}

/// Relative coordinates (d, alpha_t, alpha_v, V) of every vehicle, in the
/// layout used by rhs_relative.
inline std::vector<double> relative_coordinates(const PlatoonState& st, const Scenario& sc) {
  const PlatoonCommands cmd = evaluate_commands(st, sc);
  std::vector<double> x;
  x.reserve(kStatesPerVehicle * st.vehicles.size());
  for (std::size_t i = 0; i < st.vehicles.size(); ++i) {
    x.push_back(cmd.vehicles[i].geometry.range);
    x.push_back(cmd.vehicles[i].geometry.alpha_t);
    x.push_back(cmd.vehicles[i].geometry.alpha_v);
    x.push_back(st.vehicles[i].speed);
  }
  return x;
}

struct MetricThresholds {
  double path = 0.1;   // m
  double gap = 0.1;    // m
  double speed = 0.1;  // m/s
};

struct VehicleMetrics {
  std::size_t vehicle = 1;
  double max_path_error = 0.0;
  double terminal_mean_path_error = 0.0;  // mean |path_err| over the last 10% of the run
  double max_gap_error = 0.0;
  double max_speed_error = 0.0;
  // Last logged instant at which any error reached its threshold (0 if
  // never). settled is false when that instant is the final record.
  double settling_time = 0.0;
  bool settled = true;
};

inline std::vector<VehicleMetrics> metrics(const TrajectoryLog& log, const Scenario& sc,
                                           const MetricThresholds& thr = {}) {
  if (log.records.empty()) throw DomainError("metrics: empty log");
  const double t_end = log.records.back().t;
  const double t_tail = sc.t_final - 0.1 * sc.t_final;
  std::vector<VehicleMetrics> out(log.n);
  std::vector<std::size_t> tail_count(log.n, 0);
  for (std::size_t i = 0; i < log.n; ++i) out[i].vehicle = i + 1;
  for (const auto& r : log.records) {
    auto& m = out[r.vehicle - 1];
    const double pe = std::abs(r.path_err), ge = std::abs(r.gap_err), ve = std::abs(r.vel_err);
    m.max_path_error = std::max(m.max_path_error, pe);
    m.max_gap_error = std::max(m.max_gap_error, ge);
    m.max_speed_error = std::max(m.max_speed_error, ve);
    if (r.t >= t_tail) {
      m.terminal_mean_path_error += pe;
      ++tail_count[r.vehicle - 1];
    }
    if (pe >= thr.path || ge >= thr.gap || ve >= thr.speed) {
      m.settling_time = r.t;
      if (r.t == t_end) m.settled = false;
    }
  }
  for (std::size_t i = 0; i < log.n; ++i) {
    if (tail_count[i] > 0) out[i].terminal_mean_path_error /= static_cast<double>(tail_count[i]);
  }
  return out;
}

inline constexpr const char* kTrajectoryCsvHeader =
    "t,vehicle,x,y,gamma,V,d,alpha_t,alpha_v,a_cmd,V_cmd,path_err,gap_err,vel_err";

/// Writes the log as CSV, 9 significant digits per value.
inline void write_csv(std::ostream& os, const TrajectoryLog& log) {
  os << kTrajectoryCsvHeader << '\n';
  char buf[512];
  for (const auto& r : log.records) {
    std::snprintf(buf, sizeof buf, "%.9g,%zu,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                  r.t, r.vehicle, r.x, r.y, r.gamma, r.V, r.d, r.alpha_t, r.alpha_v, r.a_cmd, r.V_cmd,
                  r.path_err, r.gap_err, r.vel_err);
    os << buf;
  }
}

/// Reflection of a scenario across the x-axis: circles swap direction,
/// headings and lateral disturbances change sign.
inline Scenario mirrored(const Scenario& sc) {
  Scenario m = sc;
  if (auto* c = std::get_if<Circle>(&m.path)) {
    c->center.y = -c->center.y;
    c->direction = c->direction == Direction::CCW ? Direction::CW : Direction::CCW;
    c->phase = -c->phase;
  } else {
    auto& l = std::get<Line>(m.path);
    l.origin.y = -l.origin.y;
    l.heading = -l.heading;
  }
  if (auto* off = std::get_if<OffsetStart>(&m.initial)) {
    off->dgamma = -off->dgamma;
    if (std::holds_alternative<Line>(m.path)) off->dr = -off->dr;
  } else if (auto* list = std::get_if<std::vector<VehicleState>>(&m.initial)) {
    for (auto& v : *list) {
      v.position.y = -v.position.y;
      v.heading = -v.heading;
    }
  }
  for (auto& d : m.disturbances)
    if (d.kind == Disturbance::Kind::LateralAccel) d.magnitude = -d.magnitude;
  return m;
}

}  // namespace tsg

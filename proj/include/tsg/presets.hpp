#pragma once

#include <string>
#include <string_view>

#include "tsg/error.hpp"
#include "tsg/sim.hpp"

namespace tsg {

// Highway platoon: R = 50 m, d* = 75 m, V_c = 25 m/s, k_v = 0.5, four
// vehicles, started 5 m outside the circle with a 0.2 rad heading error.
inline Scenario highway_preset(GuidanceLaw law = GuidanceLaw::Sine) {
  Scenario sc;
  sc.path = Circle{{0.0, 0.0}, 50.0, Direction::CCW};
  sc.n = 4;
  sc.law = law;
  sc.params = {75.0, 0.5, 25.0};
  sc.initial = OffsetStart{5.0, 0.2};
  sc.dt = 0.01;
  sc.t_final = 300.0;
  sc.log_decimation = 10;
  return sc;
}

// Six small differential-drive robots: R = 1 m, d* = 0.7 m, V_c = 0.35 m/s.
// Offsets are the highway ones scaled by R.
inline Scenario robot_preset(GuidanceLaw law = GuidanceLaw::Sine) {
  Scenario sc;
  sc.path = Circle{{0.0, 0.0}, 1.0, Direction::CCW};
  sc.n = 6;
  sc.law = law;
  sc.params = {0.7, 0.5, 0.35};
  sc.initial = OffsetStart{0.1, 0.2};
  sc.dt = 0.002;
  sc.t_final = 200.0;
  sc.track_width = 0.09;
  sc.log_decimation = 50;
  return sc;
}

/// Named presets: highway (= highway-sine), highway-regular, robot
/// (= robot-sine), robot-regular.
inline Scenario preset(std::string_view name) {
  if (name == "highway" || name == "highway-sine") return highway_preset(GuidanceLaw::Sine);
  if (name == "highway-regular") return highway_preset(GuidanceLaw::Regular);
  if (name == "robot" || name == "robot-sine") return robot_preset(GuidanceLaw::Sine);
  if (name == "robot-regular") return robot_preset(GuidanceLaw::Regular);
  throw ScenarioError("preset: unknown preset '" + std::string(name) +
                      "' (expected highway, highway-sine, highway-regular, robot, robot-sine, robot-regular)");
}

}  // namespace tsg

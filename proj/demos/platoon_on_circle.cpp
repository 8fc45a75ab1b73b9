// Four-vehicle platoon on a 50 m circle under both guidance laws.
// Prints where each vehicle ends up relative to the path.

#include <cstdio>

#include "tsg/tsg.hpp"

int main() {
  for (auto law : {tsg::GuidanceLaw::Sine, tsg::GuidanceLaw::Regular}) {
    tsg::Scenario sc = tsg::highway_preset(law);
    sc.t_final = 200.0;
    const auto ms = tsg::metrics(tsg::run(sc), sc);
    std::printf("%s law\n", std::string(tsg::to_string(law)).c_str());
    for (const auto& m : ms) {
      std::printf("  vehicle %zu: terminal |path error| %.4f m, settled %s\n", m.vehicle,
                  m.terminal_mean_path_error, m.settled ? "yes" : "no");
    }
  }
}

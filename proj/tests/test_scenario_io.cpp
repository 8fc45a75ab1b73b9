#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "tsg/tsg.hpp"

using namespace tsg;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return "";
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

std::string csv_of(const Scenario& sc) {
  std::ostringstream os;
  write_csv(os, run(sc));
  return os.str();
}

const char* kFull = R"({
  "path": {"type": "circle", "center": [1, -2], "radius": 50, "direction": "cw"},
  "n": 3, "law": "regular", "d_star": 60, "k_v": 0.8, "V_c": 20,
  "dt": 0.02, "t_final": 5,
  "initial": {"preset": "offset", "dr": 2, "dgamma": -0.1},
  "disturbances": [{"vehicle": 2, "kind": "velocity", "magnitude": 3, "t_start": 1, "duration": 0.5}],
  "track_width": 1.8,
  "log_decimation": 4
})";

}  // namespace

TEST(ScenarioIo, ParsesFullDocument) {
  const Scenario sc = parse_scenario(kFull);
  const auto& c = std::get<Circle>(sc.path);
  EXPECT_EQ(c.center, (Vec2{1, -2}));
  EXPECT_EQ(c.direction, Direction::CW);
  EXPECT_EQ(sc.n, 3u);
  EXPECT_EQ(sc.law, GuidanceLaw::Regular);
  EXPECT_EQ(sc.params.k_v, 0.8);
  EXPECT_EQ(std::get<OffsetStart>(sc.initial).dgamma, -0.1);
  ASSERT_EQ(sc.disturbances.size(), 1u);
  EXPECT_EQ(sc.disturbances[0].kind, Disturbance::Kind::Velocity);
  EXPECT_EQ(*sc.track_width, 1.8);
  EXPECT_EQ(sc.log_decimation, 4u);
}

TEST(ScenarioIo, PresetWithOverrides) {
  const Scenario sc = parse_scenario(R"({"preset": "highway", "law": "regular", "t_final": 30})");
  EXPECT_EQ(sc.law, GuidanceLaw::Regular);
  EXPECT_EQ(sc.t_final, 30.0);
  EXPECT_EQ(sc.n, 4u);
  EXPECT_EQ(sc.params.d_star, 75.0);
}

TEST(ScenarioIo, PresetsMatchStatedParameters) {
  const Scenario h = preset("highway");
  EXPECT_EQ(std::get<Circle>(h.path).radius, 50.0);
  EXPECT_EQ(h.params.d_star, 75.0);
  EXPECT_EQ(h.params.V_c, 25.0);
  EXPECT_EQ(h.params.k_v, 0.5);
  EXPECT_EQ(h.n, 4u);
  const Scenario r = preset("robot");
  EXPECT_EQ(std::get<Circle>(r.path).radius, 1.0);
  EXPECT_EQ(r.params.d_star, 0.7);
  EXPECT_EQ(r.params.V_c, 0.35);
  EXPECT_EQ(r.n, 6u);
  EXPECT_THROW(preset("motorway"), ScenarioError);
}

TEST(ScenarioIo, FieldPreciseErrors) {
  EXPECT_TRUE(starts_with(error_of(R"({"preset": "highway", "d_star": 100})"), "d_star: must satisfy d_star < 2R"));
  EXPECT_TRUE(starts_with(error_of(R"({"preset": "highway", "dt": 0})"), "dt:"));
  EXPECT_TRUE(starts_with(error_of(R"({"preset": "highway", "dt": "fast"})"), "dt: expected a number"));
  EXPECT_TRUE(starts_with(error_of(R"({"preset": "highway", "n": 0})"), "n:"));
  EXPECT_TRUE(starts_with(error_of(R"({"preset": "highway", "law": "pure-pursuit"})"), "law:"));
  EXPECT_TRUE(starts_with(error_of(R"({"preset": "highway", "speed": 3})"), "speed: unknown field"));
  EXPECT_TRUE(starts_with(error_of(R"({"preset": "highway", "path": {"type": "spiral"}})"), "path.type:"));
  EXPECT_TRUE(starts_with(error_of(R"({"preset": "highway", "path": {"type": "circle"}})"), "path.radius:"));
  EXPECT_TRUE(starts_with(
      error_of(R"({"preset": "highway", "disturbances": [{"vehicle": 9, "kind": "lateral", "magnitude": 1, "t_start": 0, "duration": 1}]})"),
      "disturbances[0].vehicle: index 9 out of range 1..4"));
  EXPECT_TRUE(starts_with(
      error_of(R"({"preset": "highway", "disturbances": [{"vehicle": 1, "kind": "gust", "magnitude": 1, "t_start": 0, "duration": 1}]})"),
      "disturbances[0].kind:"));
  EXPECT_TRUE(starts_with(error_of(R"({"preset": "highway", "initial": {"preset": "random"}})"), "initial.preset:"));
  EXPECT_TRUE(starts_with(error_of(R"({"path": {"type": "line"}})"), "n: missing required field"));
  EXPECT_TRUE(starts_with(error_of("[1, 2]"), "scenario:"));
}

TEST(ScenarioIo, SyntaxErrorsCarryPosition) {
  const std::string msg = error_of("{\n  \"preset\": \"highway\",\n  \"n\": ,\n}");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("column"), std::string::npos) << msg;
}

TEST(ScenarioIo, ExplicitInitialList) {
  const Scenario sc = parse_scenario(R"({"path": {"type": "line", "origin": [0, 0], "heading": 0},
    "n": 2, "law": "sine", "d_star": 10, "V_c": 5, "dt": 0.01, "t_final": 1,
    "initial": [{"x": -9, "y": 1, "gamma": 0.1, "V": 5}, {"x": -20, "y": 0, "gamma": 0, "V": 4}]})");
  const auto& list = std::get<std::vector<VehicleState>>(sc.initial);
  ASSERT_EQ(list.size(), 2u);
  EXPECT_EQ(list[1].speed, 4.0);
  EXPECT_TRUE(starts_with(error_of(R"({"path": {"type": "line"}, "n": 3, "law": "sine", "d_star": 10, "V_c": 5,
    "dt": 0.01, "t_final": 1, "initial": [{"x": 0, "y": 0, "gamma": 0, "V": 1}]})"), "initial:"));
}

TEST(ScenarioIo, EchoRoundTripReproducesCsv) {
  Scenario sc = parse_scenario(kFull);
  const Json echo = scenario_to_json(sc);
  const Scenario again = scenario_from_json(Json::parse(echo.dump()));
  EXPECT_EQ(scenario_to_json(again), echo);
  EXPECT_EQ(csv_of(again), csv_of(sc));

  Scenario h = preset("highway");
  h.t_final = 10.0;
  const Json summary = summary_to_json(h, metrics(run(h), h), 0.0);
  const Scenario from_summary = scenario_from_json(Json::parse(summary.dump(2)).at("scenario"));
  EXPECT_EQ(csv_of(from_summary), csv_of(h));
}

TEST(ScenarioIo, ReportDocuments) {
  Scenario h = preset("highway");
  h.t_final = 5.0;
  const auto lin = linearize(2, h.params, 50.0);
  const Json s = summary_to_json(h, metrics(run(h), h), 1.5, &lin);
  for (const char* key : {"tool", "version", "runtime_s", "scenario", "vehicles", "linearization"})
    EXPECT_TRUE(s.contains(key)) << key;
  EXPECT_EQ(s["vehicles"].size(), 4u);
  const Json& l = s["linearization"];
  for (const char* key : {"n", "d_star", "R", "V_c", "k_v", "alpha", "beta", "eigenvalues_numeric",
                          "eigenvalues_closed_form", "max_block_discrepancy"})
    EXPECT_TRUE(l.contains(key)) << key;
  EXPECT_EQ(l["eigenvalues_numeric"].size(), 8u);
  EXPECT_EQ(l["beta"].size(), 2u);
  EXPECT_TRUE(l["stable"].get<bool>());
  EXPECT_TRUE(linearization_to_json(linearize(1, h.params, 50.0))["beta"].is_null());
}

#pragma once

#include <complex>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "tsg/error.hpp"
#include "tsg/linearization.hpp"
#include "tsg/presets.hpp"
#include "tsg/sim.hpp"
#include "tsg/version.hpp"

namespace tsg {

using Json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void field_error(const std::string& field, const std::string& what) {
  throw ScenarioError(field + ": " + what);
}

inline double get_number(const Json& obj, const std::string& key, const std::string& field) {
  if (!obj.contains(key)) field_error(field, "missing required number");
  const Json& v = obj.at(key);
  if (!v.is_number()) field_error(field, "expected a number, got " + std::string(v.type_name()));
  return v.get<double>();
}

inline std::size_t get_count(const Json& obj, const std::string& key, const std::string& field) {
  if (!obj.contains(key)) field_error(field, "missing required integer");
  const Json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) field_error(field, "expected a non-negative integer");
  return v.get<std::size_t>();
}

inline std::string get_string(const Json& obj, const std::string& key, const std::string& field) {
  if (!obj.contains(key)) field_error(field, "missing required string");
  const Json& v = obj.at(key);
  if (!v.is_string()) field_error(field, "expected a string, got " + std::string(v.type_name()));
  return v.get<std::string>();
}

inline Vec2 get_point(const Json& obj, const std::string& key, const std::string& field) {
  if (!obj.contains(key)) field_error(field, "missing required [x, y] pair");
  const Json& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    field_error(field, "expected [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

inline void reject_unknown(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) field_error(where.empty() ? key : where + "." + key, "unknown field");
  }
}

inline Path parse_path(const Json& j) {
  if (!j.is_object()) field_error("path", "expected an object");
  const std::string type = get_string(j, "type", "path.type");
  if (type == "circle") {
    reject_unknown(j, {"type", "center", "radius", "direction", "phase"}, "path");
    Circle c;
    c.center = j.contains("center") ? get_point(j, "center", "path.center") : Vec2{};
    c.radius = get_number(j, "radius", "path.radius");
    if (j.contains("direction")) {
      const std::string dir = get_string(j, "direction", "path.direction");
      if (dir == "ccw") {
        c.direction = Direction::CCW;
      } else if (dir == "cw") {
        c.direction = Direction::CW;
      } else {
        field_error("path.direction", "expected \"ccw\" or \"cw\", got \"" + dir + "\"");
      }
    }
    if (j.contains("phase")) c.phase = get_number(j, "phase", "path.phase");
    return c;
  }
  if (type == "line") {
    reject_unknown(j, {"type", "origin", "heading"}, "path");
    Line l;
    l.origin = j.contains("origin") ? get_point(j, "origin", "path.origin") : Vec2{};
    if (j.contains("heading")) l.heading = get_number(j, "heading", "path.heading");
    return l;
  }
  field_error("path.type", "expected \"circle\" or \"line\", got \"" + type + "\"");
}

inline InitialCondition parse_initial(const Json& j) {
  if (j.is_array()) {
    std::vector<VehicleState> list;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string f = "initial[" + std::to_string(i) + "]";
      if (!j[i].is_object()) field_error(f, "expected an object {x, y, gamma, V}");
      reject_unknown(j[i], {"x", "y", "gamma", "V"}, f);
      list.push_back({{get_number(j[i], "x", f + ".x"), get_number(j[i], "y", f + ".y")},
                      get_number(j[i], "gamma", f + ".gamma"),
                      get_number(j[i], "V", f + ".V")});
    }
    return list;
  }
  if (!j.is_object()) field_error("initial", "expected a preset object or a list of vehicle states");
  const std::string p = get_string(j, "preset", "initial.preset");
  if (p == "equilibrium") {
    reject_unknown(j, {"preset"}, "initial");
    return EquilibriumStart{};
  }
  if (p == "offset") {
    reject_unknown(j, {"preset", "dr", "dgamma"}, "initial");
    return OffsetStart{j.contains("dr") ? get_number(j, "dr", "initial.dr") : 0.0,
                       j.contains("dgamma") ? get_number(j, "dgamma", "initial.dgamma") : 0.0};
  }
  field_error("initial.preset", "expected \"equilibrium\" or \"offset\", got \"" + p + "\"");
}

inline Disturbance parse_disturbance(const Json& j, std::size_t k) {
  const std::string f = "disturbances[" + std::to_string(k) + "]";
  if (!j.is_object()) field_error(f, "expected an object");
  reject_unknown(j, {"vehicle", "kind", "magnitude", "t_start", "duration"}, f);
  Disturbance d;
  d.vehicle = get_count(j, "vehicle", f + ".vehicle");
  const std::string kind = get_string(j, "kind", f + ".kind");
  if (kind == "lateral") {
    d.kind = Disturbance::Kind::LateralAccel;
  } else if (kind == "velocity") {
    d.kind = Disturbance::Kind::Velocity;
  } else {
    field_error(f + ".kind", "expected \"lateral\" or \"velocity\", got \"" + kind + "\"");
  }
  d.magnitude = get_number(j, "magnitude", f + ".magnitude");
  d.t_start = get_number(j, "t_start", f + ".t_start");
  d.duration = get_number(j, "duration", f + ".duration");
  return d;
}

}  // namespace detail

/// Builds a validated Scenario from a parsed document. A top-level "preset"
/// key supplies defaults that the remaining keys override.
inline Scenario scenario_from_json(const Json& j) {
  using namespace detail;
  if (!j.is_object()) throw ScenarioError("scenario: expected a JSON object at top level");
  reject_unknown(j,
                 {"preset", "path", "n", "law", "d_star", "k_v", "V_c", "dt", "t_final", "initial",
                  "disturbances", "track_width", "log_decimation"},
                 "");
  const bool has_preset = j.contains("preset");
  Scenario sc = has_preset ? preset(get_string(j, "preset", "preset")) : Scenario{};
  auto need = [&](const char* key) {
    if (!has_preset && !j.contains(key)) field_error(key, "missing required field");
    return j.contains(key);
  };
  if (need("path")) sc.path = parse_path(j.at("path"));
  if (need("n")) sc.n = get_count(j, "n", "n");
  if (need("law")) {
    const std::string law = get_string(j, "law", "law");
    if (law == "sine") {
      sc.law = GuidanceLaw::Sine;
    } else if (law == "regular") {
      sc.law = GuidanceLaw::Regular;
    } else {
      field_error("law", "expected \"regular\" or \"sine\", got \"" + law + "\"");
    }
  }
  if (need("d_star")) sc.params.d_star = get_number(j, "d_star", "d_star");
  if (j.contains("k_v")) sc.params.k_v = get_number(j, "k_v", "k_v");
  if (need("V_c")) sc.params.V_c = get_number(j, "V_c", "V_c");
  if (need("dt")) sc.dt = get_number(j, "dt", "dt");
  if (need("t_final")) sc.t_final = get_number(j, "t_final", "t_final");
  if (j.contains("initial")) sc.initial = parse_initial(j.at("initial"));
  if (j.contains("disturbances")) {
    const Json& list = j.at("disturbances");
    if (!list.is_array()) field_error("disturbances", "expected a list");
    sc.disturbances.clear();
    for (std::size_t k = 0; k < list.size(); ++k) sc.disturbances.push_back(parse_disturbance(list[k], k));
  }
  if (j.contains("track_width")) {
    if (j.at("track_width").is_null()) {
      sc.track_width.reset();
    } else {
      sc.track_width = get_number(j, "track_width", "track_width");
    }
  }
  if (j.contains("log_decimation")) sc.log_decimation = get_count(j, "log_decimation", "log_decimation");
  validate(sc);
  return sc;
}

/// Parses scenario text. JSON syntax errors are reported with line and
/// column.
inline Scenario parse_scenario(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError(std::string("scenario: malformed document: ") + e.what());
  }
  return scenario_from_json(j);
}

inline Scenario load_scenario(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ScenarioError("scenario: cannot open '" + file + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

/// Full explicit form of a scenario; parse(to_json(sc)) reproduces sc.
inline Json scenario_to_json(const Scenario& sc) {
  Json j;
  if (const auto* c = std::get_if<Circle>(&sc.path)) {
    j["path"] = {{"type", "circle"},
                 {"center", {c->center.x, c->center.y}},
                 {"radius", c->radius},
                 {"direction", c->direction == Direction::CCW ? "ccw" : "cw"},
                 {"phase", c->phase}};
  } else {
    const auto& l = std::get<Line>(sc.path);
    j["path"] = {{"type", "line"}, {"origin", {l.origin.x, l.origin.y}}, {"heading", l.heading}};
  }
  j["n"] = sc.n;
  j["law"] = std::string(to_string(sc.law));
  j["d_star"] = sc.params.d_star;
  j["k_v"] = sc.params.k_v;
  j["V_c"] = sc.params.V_c;
  j["dt"] = sc.dt;
  j["t_final"] = sc.t_final;
  if (std::holds_alternative<EquilibriumStart>(sc.initial)) {
    j["initial"] = {{"preset", "equilibrium"}};
  } else if (const auto* off = std::get_if<OffsetStart>(&sc.initial)) {
    j["initial"] = {{"preset", "offset"}, {"dr", off->dr}, {"dgamma", off->dgamma}};
  } else {
    Json list = Json::array();
    for (const auto& v : std::get<std::vector<VehicleState>>(sc.initial)) {
      list.push_back({{"x", v.position.x}, {"y", v.position.y}, {"gamma", v.heading}, {"V", v.speed}});
    }
    j["initial"] = list;
  }
  Json dist = Json::array();
  for (const auto& d : sc.disturbances) {
    dist.push_back({{"vehicle", d.vehicle},
                    {"kind", d.kind == Disturbance::Kind::LateralAccel ? "lateral" : "velocity"},
                    {"magnitude", d.magnitude},
                    {"t_start", d.t_start},
                    {"duration", d.duration}});
  }
  j["disturbances"] = dist;
  j["track_width"] = sc.track_width ? Json(*sc.track_width) : Json(nullptr);
  j["log_decimation"] = sc.log_decimation;
  return j;
}

inline Json complex_to_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

inline Json spectrum_to_json(const Spectrum& s) {
  Json out = Json::array();
  for (const auto& z : s) out.push_back(complex_to_json(z));
  return out;
}

inline Json metrics_to_json(const std::vector<VehicleMetrics>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) {
    out.push_back({{"vehicle", m.vehicle},
                   {"max_path_error", m.max_path_error},
                   {"terminal_mean_path_error", m.terminal_mean_path_error},
                   {"max_gap_error", m.max_gap_error},
                   {"max_speed_error", m.max_speed_error},
                   {"settling_time", m.settling_time},
                   {"settled", m.settled}});
  }
  return out;
}

inline Json linearization_to_json(const LinearizationReport& r) {
  Json j;
  j["n"] = r.n;
  j["d_star"] = r.params.d_star;
  j["R"] = r.radius;
  j["V_c"] = r.params.V_c;
  j["k_v"] = r.params.k_v;
  j["alpha"] = r.alpha;
  j["beta"] = r.beta ? complex_to_json(*r.beta) : Json(nullptr);
  j["eigenvalues_numeric"] = spectrum_to_json(r.spectrum);
  j["eigenvalues_closed_form"] = spectrum_to_json(r.closed_form);
  j["max_block_discrepancy"] = r.max_block_discrepancy;
  Json disc = Json::array();
  for (const auto& d : r.block_discrepancies) {
    disc.push_back({{"row", d.row}, {"col", d.col}, {"finite_difference", d.finite_difference}, {"symbolic", d.symbolic}});
  }
  j["block_discrepancies"] = disc;
  j["spectrum_distance"] = r.spectrum_distance;
  j["unmatched_eigenvalues"] = spectrum_to_json(r.unmatched);
  j["stable"] = r.stable();
  return j;
}

/// Summary document of a simulation. The scenario echo alone reproduces
/// the run.
inline Json summary_to_json(const Scenario& sc, const std::vector<VehicleMetrics>& ms, double runtime_s,
                            const LinearizationReport* lin = nullptr) {
  Json j;
  j["tool"] = "tsg";
  j["version"] = kVersion;
  j["runtime_s"] = runtime_s;
  j["scenario"] = scenario_to_json(sc);
  j["vehicles"] = metrics_to_json(ms);
  if (lin) j["linearization"] = linearization_to_json(*lin);
  return j;
}

}  // namespace tsg

// tsg: command-line front end for the trajectory-shaping platoon toolkit.
//
//   tsg simulate    --scenario FILE | --preset NAME  --out DIR
//   tsg linearize   --scenario FILE | --preset NAME  --out DIR
//   tsg equilibrium --scenario FILE | --preset NAME
//   tsg sweep       --scenario FILE | --preset NAME  --out DIR
//                   --ratio-min A --ratio-max B --steps K

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tsg/tsg.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kUsage = 2,
  kScenarioError = 3,
  kDomainError = 4,
  kNumericalError = 5,
  kGeometryError = 6,
};

struct Options {
  std::string scenario_file;
  std::string preset_name;
  std::string out_dir = ".";
  bool with_linearization = false;
  double ratio_min = 0.05;
  double ratio_max = 0.95;
  std::size_t steps = 10;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

tsg::Scenario load(const Options& opt) {
  if (!opt.scenario_file.empty() && !opt.preset_name.empty()) {
    throw tsg::ScenarioError("give either --scenario or --preset, not both");
  }
  if (!opt.scenario_file.empty()) {
    std::error_code ec;
    if (!fs::is_regular_file(opt.scenario_file, ec)) {
      throw IoError("cannot read scenario file '" + opt.scenario_file + "'");
    }
    return tsg::load_scenario(opt.scenario_file);
  }
  if (!opt.preset_name.empty()) return tsg::preset(opt.preset_name);
  throw tsg::ScenarioError("no scenario: pass --scenario FILE or --preset NAME");
}

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  return fs::path(dir);
}

void write_file(const fs::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write '" + file.string() + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + file.string() + "'");
}

double circle_radius(const tsg::Scenario& sc, const char* command) {
  if (const auto* c = std::get_if<tsg::Circle>(&sc.path)) return c->radius;
  throw tsg::DomainError(std::string(command) + " requires a circular path");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void print_eigen_table(const tsg::LinearizationReport& rep) {
  std::printf("%4s %14s %14s %14s %14s %11s\n", "#", "re", "im", "cf_re", "cf_im", "|delta|");
  std::vector<char> used(rep.closed_form.size(), 0);
  for (std::size_t i = 0; i < rep.spectrum.size(); ++i) {
    const auto z = rep.spectrum[i];
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < rep.closed_form.size(); ++k) {
      if (used[k]) continue;
      const double d = std::abs(z - rep.closed_form[k]);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    used[best] = 1;
    std::printf("%4zu %14.9f %14.9f %14.9f %14.9f %11.3e\n", i + 1, z.real(), z.imag(),
                rep.closed_form[best].real(), rep.closed_form[best].imag(), best_d);
  }
}

int cmd_simulate(const Options& opt) {
  const tsg::Scenario sc = load(opt);
  const fs::path dir = prepare_out_dir(opt.out_dir);
  const auto t0 = std::chrono::steady_clock::now();
  const tsg::TrajectoryLog log = tsg::run(sc);
  const auto ms = tsg::metrics(log, sc);
  std::optional<tsg::LinearizationReport> lin;
  if (opt.with_linearization) lin = tsg::linearize(sc.n, sc.params, circle_radius(sc, "linearization"));
  const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::ostringstream csv;
  tsg::write_csv(csv, log);
  write_file(dir / "trajectory.csv", csv.str());
  write_file(dir / "summary.json", tsg::summary_to_json(sc, ms, runtime, lin ? &*lin : nullptr).dump(2) + "\n");

  std::printf("%-8s %14s %14s %14s %14s %10s\n", "vehicle", "max|path|", "terminal|path|", "max|gap|",
              "max|vel|", "settle_s");
  for (const auto& m : ms) {
    std::printf("%-8zu %14.6g %14.6g %14.6g %14.6g %10s\n", m.vehicle, m.max_path_error,
                m.terminal_mean_path_error, m.max_gap_error, m.max_speed_error,
                m.settled ? fmt(m.settling_time).c_str() : "never");
  }
  std::printf("wrote %s and %s\n", (dir / "trajectory.csv").c_str(), (dir / "summary.json").c_str());
  return kOk;
}

int cmd_linearize(const Options& opt) {
  const tsg::Scenario sc = load(opt);
  const double radius = circle_radius(sc, "linearize");
  const fs::path dir = prepare_out_dir(opt.out_dir);
  const auto rep = tsg::linearize(sc.n, sc.params, radius);
  write_file(dir / "linearization.json", tsg::linearization_to_json(rep).dump(2) + "\n");
  std::printf("n=%zu d*=%s R=%s V_c=%s k_v=%s alpha=%s\n", sc.n, fmt(sc.params.d_star).c_str(),
              fmt(radius).c_str(), fmt(sc.params.V_c).c_str(), fmt(sc.params.k_v).c_str(),
              fmt(rep.alpha).c_str());
  if (rep.beta) {
    std::printf("beta = %s %+.9gj\n", fmt(rep.beta->real()).c_str(), rep.beta->imag());
  } else {
    std::printf("beta = (undefined for n = 1)\n");
  }
  print_eigen_table(rep);
  std::printf("max block discrepancy %.3e (%zu entries beyond tolerance)\n", rep.max_block_discrepancy,
              rep.block_discrepancies.size());
  for (const auto& d : rep.block_discrepancies) {
    std::printf("  A[%zu][%zu]: fd=%s symbolic=%s\n", d.row, d.col, fmt(d.finite_difference).c_str(),
                fmt(d.symbolic).c_str());
  }
  std::printf("spectrum distance %.3e, %s\n", rep.spectrum_distance, rep.stable() ? "stable" : "NOT stable");
  std::printf("wrote %s\n", (dir / "linearization.json").c_str());
  return kOk;
}

int cmd_equilibrium(const Options& opt) {
  const tsg::Scenario sc = load(opt);
  double radius = std::numeric_limits<double>::infinity();
  if (const auto* c = std::get_if<tsg::Circle>(&sc.path)) radius = c->radius;
  const auto x = tsg::equilibrium_state<double>(sc.n, sc.params, radius);
  const auto u = tsg::control_input<double>(sc.params, radius);
  for (auto law : {tsg::GuidanceLaw::Sine, tsg::GuidanceLaw::Regular}) {
    double res = 0.0;
    for (double v : tsg::rhs_relative<double>(x, u, law, sc.params)) res = std::max(res, std::abs(v));
    std::printf("%-8s ||f(x_eq, u_eq)||_inf = %.3e\n", std::string(tsg::to_string(law)).c_str(), res);
  }
  const auto ss = tsg::steady_state_regular(sc.n, sc.params, radius);
  std::printf("regular-law steady state%s:\n", ss.from_simulation ? " (from simulation)" : "");
  std::printf("%-8s %14s %14s %14s %14s\n", "vehicle", "gap", "speed", "radius", "offset");
  for (std::size_t i = 0; i < ss.vehicles.size(); ++i) {
    const auto& v = ss.vehicles[i];
    std::printf("%-8zu %14.9g %14.9g %14.9g %14.9g\n", i + 1, v.gap, v.speed, v.radius, v.radius_offset);
  }
  return kOk;
}

int cmd_sweep(const Options& opt) {
  const tsg::Scenario sc = load(opt);
  const double radius = circle_radius(sc, "sweep");
  if (!(opt.ratio_min > 0.0 && opt.ratio_min < opt.ratio_max && opt.ratio_max < 1.0)) {
    throw tsg::DomainError("sweep requires 0 < ratio-min < ratio-max < 1");
  }
  if (opt.steps < 1) throw tsg::DomainError("sweep requires steps >= 1");
  const fs::path dir = prepare_out_dir(opt.out_dir);
  std::vector<double> ratios(opt.steps);
  for (std::size_t k = 0; k < opt.steps; ++k) {
    ratios[k] = opt.steps == 1 ? opt.ratio_min
                               : opt.ratio_min + (opt.ratio_max - opt.ratio_min) * static_cast<double>(k) /
                                                     static_cast<double>(opt.steps - 1);
  }
  struct Row {
    tsg::SteadyState regular, sine;
  };
  std::vector<std::future<Row>> jobs;
  for (double r : ratios) {
    jobs.push_back(std::async(std::launch::async, [&sc, radius, r] {
      tsg::GuidanceParams p = sc.params;
      p.d_star = 2.0 * radius * r;
      return Row{tsg::steady_state(tsg::GuidanceLaw::Regular, sc.n, p, radius),
                 tsg::steady_state(tsg::GuidanceLaw::Sine, sc.n, p, radius)};
    }));
  }
  std::ostringstream csv;
  csv << "ratio,d_star";
  for (std::size_t i = 1; i <= sc.n; ++i) csv << ",regular_" << i;
  for (std::size_t i = 1; i <= sc.n; ++i) csv << ",sine_" << i;
  // 1 when Newton failed (typically the speed cap is active) and the offsets
  // come from integrating the relative dynamics instead.
  csv << ",regular_simulated,sine_simulated\n";
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    const Row row = jobs[k].get();
    csv << fmt(ratios[k]) << ',' << fmt(2.0 * radius * ratios[k]);
    for (const auto& v : row.regular.vehicles) csv << ',' << fmt(v.radius_offset);
    for (const auto& v : row.sine.vehicles) csv << ',' << fmt(v.radius_offset);
    csv << ',' << int(row.regular.from_simulation) << ',' << int(row.sine.from_simulation) << '\n';
  }
  write_file(dir / "sweep.csv", csv.str());
  std::cout << csv.str();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory-shaping guidance and platoon stability toolkit"};
  app.set_version_flag("--version", tsg::kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--scenario", opt.scenario_file, "Scenario document (JSON)");
  app.add_option("--preset", opt.preset_name,
                 "Built-in scenario: highway, highway-sine, highway-regular, robot, robot-regular");
  app.add_option("--out", opt.out_dir, "Output directory")->capture_default_str();

  auto* sim = app.add_subcommand("simulate", "Run a scenario; write trajectory.csv and summary.json");
  sim->add_flag("--with-linearization", opt.with_linearization, "Include the linearization report in the summary");
  auto* lin = app.add_subcommand("linearize", "Linearize the sine-law platoon; write linearization.json");
  auto* eq = app.add_subcommand("equilibrium", "Equilibrium residuals of both laws and regular-law offsets");
  auto* sweep = app.add_subcommand("sweep", "Steady offsets of both laws over a range of d*/2R; write sweep.csv");
  sweep->add_option("--ratio-min", opt.ratio_min, "Smallest d*/2R")->capture_default_str();
  sweep->add_option("--ratio-max", opt.ratio_max, "Largest d*/2R")->capture_default_str();
  sweep->add_option("--steps", opt.steps, "Number of ratios")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*sim) return cmd_simulate(opt);
    if (*lin) return cmd_linearize(opt);
    if (*eq) return cmd_equilibrium(opt);
    if (*sweep) return cmd_sweep(opt);
  } catch (const tsg::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return kScenarioError;
  } catch (const tsg::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kDomainError;
  } catch (const tsg::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const tsg::DegenerateGeometry& e) {
    std::cerr << "degenerate geometry: " << e.what() << '\n';
    return kGeometryError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kUsage;
}

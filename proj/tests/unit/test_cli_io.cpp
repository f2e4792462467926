// Copyright 2026 The Intent MPC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "intent_mpc/commands.hpp"
#include "intent_mpc/errors.hpp"
#include "intent_mpc/scenario_io.hpp"
#include "intent_mpc/svg_plot.hpp"
#include "intent_mpc/trace_io.hpp"

using namespace intent_mpc;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kScenarios = fs::path(INTENT_MPC_SOURCE_DIR) / "scenarios";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json reference_doc() { return json::parse(slurp(kScenarios / "reference_crossing.json")); }

std::string schema_error_path(const json& doc) {
  try {
    io::parse_scenario(doc.dump());
  } catch (const SchemaError& e) {
    return e.path();
  }
  return "<accepted>";
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("intent_mpc_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct Exec {
  int code;
  std::string out;
  std::string err;
};

Exec run_cli(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + INTENT_MPC_CLI + "\" " + args + " >\"" +
                          out.string() + "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::multiset<std::string> polyline_points(const std::string& svg) {
  std::multiset<std::string> out;
  const std::regex re("<polyline[^>]* points=\"([^\"]*)\"");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it) {
    out.insert((*it)[1]);
  }
  return out;
}

void check_svg(const std::string& svg) {
  CHECK(svg.rfind("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg ", 0) == 0);
  CHECK(svg.find("</svg>") == svg.size() - 7);  // trailing newline
  CHECK(svg.find("nan") == std::string::npos);
  CHECK(svg.find("inf") == std::string::npos);
  CHECK(svg.find("href") == std::string::npos);
}

}  // namespace

TEST_CASE("bundled scenarios load") {
  for (const char* name : {"reference_crossing.json", "reference_montecarlo.json",
                           "intent_comparison.json", "no_conflict.json"}) {
    CAPTURE(name);
    CHECK_NOTHROW(io::load_scenario(kScenarios / name));
  }
  const auto mc = io::load_scenario(kScenarios / "reference_montecarlo.json");
  CHECK(mc.disturbance.kind == sim::Disturbance::Kind::Uniform);
  CHECK(mc.disturbance.hi == doctest::Approx(0.5 * kPi / 180.0));
  CHECK(mc.disturbance.lo == doctest::Approx(-0.5 * kPi / 180.0));
}

TEST_CASE("scenario JSON round trip") {
  const auto spec = io::load_scenario(kScenarios / "reference_montecarlo.json");
  const auto again = io::parse_scenario(io::scenario_to_json(spec));
  CHECK(again.own_start == spec.own_start);
  CHECK(again.intruder_target == spec.intruder_target);
  CHECK(again.rho == spec.rho);
  CHECK(again.mode == spec.mode);
  CHECK(again.weights.Qf == spec.weights.Qf);
  CHECK(again.disturbance.hi == doctest::Approx(spec.disturbance.hi).epsilon(1e-15));
  CHECK(again.rng_seed == spec.rng_seed);
}

TEST_CASE("schema errors name the offending path") {
  json doc = reference_doc();
  doc["mpc"]["rho"] = -5;
  CHECK(schema_error_path(doc) == "mpc.rho");

  doc = reference_doc();
  doc["mpc"]["horizon"] = 30;
  CHECK(schema_error_path(doc) == "mpc.horizon");

  doc = reference_doc();
  doc["sim"].erase("seed");
  CHECK(schema_error_path(doc) == "sim.seed");

  doc = reference_doc();
  doc["mpc"]["Q"][1] = -0.1;
  CHECK(schema_error_path(doc) == "mpc.Q[1]");

  doc = reference_doc();
  doc["mpc"]["Qf"][2] = 0;
  CHECK(schema_error_path(doc) == "mpc.Qf[2]");

  doc = reference_doc();
  doc["mpc"]["mode"] = "robust";
  CHECK(schema_error_path(doc) == "mpc.mode");

  doc = reference_doc();
  doc["ownship"]["start"] = json::array({0, 0});
  CHECK(schema_error_path(doc) == "ownship.start");

  doc = reference_doc();
  doc["disturbance"] = {{"kind", "uniform"}, {"lo_deg_s", 1.0}};
  CHECK(schema_error_path(doc) == "disturbance.hi_deg_s");

  doc = reference_doc();
  doc["sim"]["seed"] = -1;
  CHECK(schema_error_path(doc) == "sim.seed");

  CHECK_THROWS_AS(io::parse_scenario("{not json"), SchemaError);
}

TEST_CASE("trace CSV round trip preserves metrics") {
  auto spec = io::load_scenario(kScenarios / "no_conflict.json");
  const sim::SimTrace trace = sim::run_closed_loop(spec);
  const std::string csv = io::trace_to_csv(trace);
  CHECK(csv.rfind(std::string(io::kTraceHeader) + "\n", 0) == 0);

  const sim::SimTrace back =
      io::trace_from_csv(csv, trace.rho, trace.dt, trace.target, trace.target_radius);
  REQUIRE(back.records.size() == trace.records.size());
  CHECK_FALSE(back.records.back().status.has_value());
  const sim::Summary a = sim::metrics(trace);
  const sim::Summary b = sim::metrics(back);
  CHECK(b.min_separation == doctest::Approx(a.min_separation).epsilon(1e-6));
  CHECK(b.path_length == doctest::Approx(a.path_length).epsilon(1e-6));
  CHECK(b.min_separation_time == a.min_separation_time);
  CHECK(b.arrival_time == a.arrival_time);
  CHECK(b.violation_count == a.violation_count);
  CHECK(io::trace_to_csv(back) == csv);
}

TEST_CASE("summary JSON is deterministic and complete") {
  auto spec = io::load_scenario(kScenarios / "no_conflict.json");
  const std::string a = io::summary_to_json(spec, sim::run_closed_loop(spec), false);
  const std::string b = io::summary_to_json(spec, sim::run_closed_loop(spec), false);
  CHECK(a == b);
  const json doc = json::parse(a);
  CHECK(doc["outcome"] == "arrived");
  CHECK(doc["metrics"]["min_separation"].get<double>() == doctest::Approx(800.0));
  CHECK(doc["metrics"]["violation_count"] == 0);
}

TEST_CASE("SVG output is well formed") {
  auto spec = io::load_scenario(kScenarios / "no_conflict.json");
  const sim::SimTrace trace = sim::run_closed_loop(spec);
  check_svg(plot::trajectory_svg(trace, spec));
  check_svg(plot::distance_svg(trace, spec.rho));
  check_svg(plot::controls_svg(trace, spec.own_bounds));
}

TEST_CASE("single undisturbed overlay draws the single-run curves") {
  auto spec = io::load_scenario(kScenarios / "no_conflict.json");
  const auto report = sim::run_monte_carlo(spec, 1);
  const auto single = polyline_points(plot::trajectory_svg(report.runs[0].trace, spec));
  const auto overlay = polyline_points(plot::overlay_trajectory_svg(report, spec));
  REQUIRE(single.size() == 2);
  for (const auto& pts : single) CHECK(overlay.count(pts) >= 2);  // the run and the nominal
  check_svg(plot::overlay_trajectory_svg(report, spec));
  check_svg(plot::overlay_distance_svg(report, spec.rho));
  check_svg(plot::overlay_controls_svg(report, spec.own_bounds));
}

TEST_CASE("cli: malformed scenario exits 2 naming the key") {
  const fs::path dir = scratch("schema");
  json doc = reference_doc();
  doc["mpc"]["rho"] = -150;
  std::ofstream(dir / "bad.json") << doc.dump(2);
  const Exec r = run_cli("simulate --scenario \"" + (dir / "bad.json").string() + "\" --out \"" +
                             (dir / "out").string() + "\"",
                         dir);
  CHECK(r.code == 2);
  CHECK(r.err.find("mpc.rho") != std::string::npos);

  const Exec bad_flag = run_cli("simulate --scenario x.json --out y --mode sideways", dir);
  CHECK(bad_flag.code == 2);
}

TEST_CASE("cli: simulate writes all artifacts") {
  const fs::path dir = scratch("simulate");
  const Exec r = run_cli("simulate --scenario \"" + (kScenarios / "no_conflict.json").string() +
                             "\" --out \"" + (dir / "out").string() + "\"",
                         dir);
  CHECK(r.code == 0);
  for (const char* f : {"trace.csv", "summary.json", "traj.svg", "distance.svg", "controls.svg"}) {
    CAPTURE(f);
    CHECK(fs::exists(dir / "out" / f));
  }
}

TEST_CASE("cli: unconstrained override on the reference crossing") {
  const fs::path dir = scratch("override");
  const Exec r = run_cli("simulate --scenario \"" + (kScenarios / "reference_crossing.json").string() +
                             "\" --out \"" + (dir / "out").string() + "\" --mode unconstrained",
                         dir);
  CHECK(r.code == 0);
  const json doc = json::parse(slurp(dir / "out" / "summary.json"));
  CHECK(doc["mode"] == "unconstrained");
  CHECK(doc["metrics"]["min_separation"].get<double>() < doc["rho"].get<double>());
  CHECK(doc["metrics"]["violation_count"].get<int>() > 0);
}

TEST_CASE("cli: montecarlo is byte-reproducible") {
  const fs::path dir = scratch("montecarlo");
  json doc = json::parse(slurp(kScenarios / "reference_montecarlo.json"));
  doc["sim"]["max_steps"] = 15;
  std::ofstream(dir / "short.json") << doc.dump(2);
  const std::string base = "montecarlo --runs 3 --scenario \"" + (dir / "short.json").string() + "\"";
  const Exec a = run_cli(base + " --out \"" + (dir / "a").string() + "\"", dir);
  const Exec b = run_cli(base + " --out \"" + (dir / "b").string() + "\"", dir);
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  for (const char* f : {"report.json", "run_000.csv", "run_002.csv", "nominal.csv", "traj.svg"}) {
    CAPTURE(f);
    CHECK(fs::exists(dir / "a" / f));
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  const json report = json::parse(slurp(dir / "a" / "report.json"));
  CHECK(report["runs"] == 3);
  CHECK(report["per_run"].size() == 3);
}

TEST_CASE("cli: dubins") {
  const fs::path dir = scratch("dubins");
  const Exec straight = run_cli("dubins --start 0 0 0 --goal 200 0 0 --radius 100 --speed 10", dir);
  CHECK(straight.code == 0);
  CHECK(straight.out.find("word,LSL\n") != std::string::npos);
  CHECK(straight.out.find("total_length,200\n") != std::string::npos);
  std::istringstream rows(straight.out.substr(straight.out.find("k,angular_rate\n") + 15));
  std::string line;
  int count = 0;
  while (std::getline(rows, line)) {
    const double rate = std::stod(line.substr(line.find(',') + 1));
    CHECK(std::abs(rate) < 1e-12);
    ++count;
  }
  CHECK(count == 20);

  const Exec semi =
      run_cli("dubins --start 0 0 0 --goal 0 200 3.141592653589793 --radius 100 --speed 10", dir);
  CHECK(semi.out.find("word,LSL\n") != std::string::npos);
  CHECK(semi.out.find("total_length,314.159265\n") != std::string::npos);

  // The binary prints exactly what the library computes.
  const Pose a{123.0, 456.0, 0.7};
  const Pose g{800.0, 90.0, -2.2};
  std::ostringstream expected;
  std::ostringstream err;
  CHECK(cli::cmd_dubins({a, g, 142.857, 10.0, 1.0}, expected, err) == 0);
  const Exec rnd = run_cli("dubins --start 123 456 0.7 --goal 800 90 -2.2 --radius 142.857 --speed 10", dir);
  CHECK(rnd.out == expected.str());
  const double total = dubins::shortest_path(a, g, 142.857).total_length;
  char buf[64];
  std::snprintf(buf, sizeof buf, "total_length,%.9g\n", total);
  CHECK(rnd.out.find(buf) != std::string::npos);

  CHECK(run_cli("dubins --start 0 0 0 --goal 1 1 0 --radius -1 --speed 10", dir).code == 2);
}

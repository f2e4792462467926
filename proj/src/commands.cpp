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

#include "intent_mpc/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "intent_mpc/dubins.hpp"
#include "intent_mpc/errors.hpp"
#include "intent_mpc/scenario_io.hpp"
#include "intent_mpc/sim.hpp"
#include "intent_mpc/svg_plot.hpp"
#include "intent_mpc/trace_io.hpp"

namespace intent_mpc::cli {
namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  file << content;
  if (!file) throw std::runtime_error("failed writing " + path.string());
}

// Loads the scenario and applies command-line overrides.
sim::ScenarioSpec prepare(const RunArgs& args) {
  sim::ScenarioSpec spec = io::load_scenario(args.scenario);
  if (args.mode) {
    const auto mode = mpc::mode_from_string(*args.mode);
    if (!mode) throw SchemaError("mpc.mode", "unknown --mode '" + *args.mode + "'");
    spec.mode = *mode;
  }
  if (args.seed) spec.rng_seed = *args.seed;
  std::filesystem::create_directories(args.out_dir);
  return spec;
}

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

int cmd_simulate(const RunArgs& args, std::ostream& out, std::ostream& err) {
  sim::ScenarioSpec spec;
  try {
    spec = prepare(args);
  } catch (const SchemaError& e) {
    err << "schema error at '" << e.path() << "': " << e.what() << "\n";
    return kExitSchema;
  }
  const sim::SimTrace trace = sim::run_closed_loop(spec, {args.record_timing});
  write_file(args.out_dir / "trace.csv", io::trace_to_csv(trace));
  write_file(args.out_dir / "summary.json", io::summary_to_json(spec, trace, args.record_timing));
  write_file(args.out_dir / "traj.svg", plot::trajectory_svg(trace, spec));
  write_file(args.out_dir / "distance.svg", plot::distance_svg(trace, spec.rho));
  write_file(args.out_dir / "controls.svg", plot::controls_svg(trace, spec.own_bounds));

  const sim::Summary s = sim::metrics(trace);
  out << "outcome " << sim::to_string(trace.outcome) << ", min separation " << g(s.min_separation)
      << " m at t=" << s.min_separation_time << ", path length " << g(s.path_length) << " m\n";
  if (trace.outcome == sim::Outcome::Aborted) {
    err << "solver failure: " << trace.abort_reason << "\n";
    return kExitSolver;
  }
  return kExitOk;
}

int cmd_montecarlo(const RunArgs& args, std::size_t runs, std::ostream& out, std::ostream& err) {
  sim::ScenarioSpec spec;
  try {
    spec = prepare(args);
    if (runs < 1) throw SchemaError("runs", "must be at least 1");
  } catch (const SchemaError& e) {
    err << "schema error at '" << e.path() << "': " << e.what() << "\n";
    return kExitSchema;
  }
  const sim::MonteCarloReport report = sim::run_monte_carlo(spec, runs, {args.record_timing});
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "run_%03zu.csv", i);
    write_file(args.out_dir / name, io::trace_to_csv(report.runs[i].trace));
  }
  write_file(args.out_dir / "nominal.csv", io::trace_to_csv(report.nominal.trace));
  write_file(args.out_dir / "report.json", io::report_to_json(spec, report, args.record_timing));
  write_file(args.out_dir / "traj.svg", plot::overlay_trajectory_svg(report, spec));
  write_file(args.out_dir / "distance.svg", plot::overlay_distance_svg(report, spec.rho));
  write_file(args.out_dir / "controls.svg", plot::overlay_controls_svg(report, spec.own_bounds));

  const sim::MonteCarloAggregate& a = report.aggregate;
  out << runs << " runs, min separation " << g(a.min_min_separation) << " m, "
      << a.runs_with_violation << " with violations, intruder terminal spread "
      << g(a.intruder_terminal_spread) << " m\n";
  if (a.aborted_runs > 0 || report.nominal.trace.outcome == sim::Outcome::Aborted) {
    err << a.aborted_runs << " run(s) aborted on solver failure\n";
    return kExitSolver;
  }
  return kExitOk;
}

int cmd_dubins(const DubinsArgs& args, std::ostream& out, std::ostream& err) {
  if (!(args.radius > 0.0) || !std::isfinite(args.radius)) {
    err << "radius must be positive\n";
    return kExitSchema;
  }
  if (!(args.speed > 0.0) || !std::isfinite(args.speed) || !(args.dt > 0.0)) {
    err << "speed and dt must be positive\n";
    return kExitSchema;
  }
  if (!is_finite(args.start) || !is_finite(args.goal)) {
    err << "poses must be finite\n";
    return kExitSchema;
  }
  const dubins::Path path = dubins::shortest_path(args.start, args.goal, args.radius);
  const dubins::ControlSchedule schedule = dubins::control_schedule(path, args.speed, args.dt);
  out << "word," << dubins::to_string(path.word) << "\n";
  out << "seg_lengths," << g(path.seg_lengths[0]) << "," << g(path.seg_lengths[1]) << ","
      << g(path.seg_lengths[2]) << "\n";
  out << "total_length," << g(path.total_length) << "\n";
  out << "k,angular_rate\n";
  for (std::size_t k = 0; k < schedule.angular_rates.size(); ++k) {
    out << k << "," << g(schedule.angular_rates[k]) << "\n";
  }
  return kExitOk;
}

}  // namespace intent_mpc::cli

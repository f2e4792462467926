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

#include "intent_mpc/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "intent_mpc/errors.hpp"

namespace intent_mpc::io {
namespace {

using ordered_json = nlohmann::ordered_json;

void append(std::string& out, double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  out += buf;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    parts.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_double(std::string_view field) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw InputError("trace csv: bad number '" + std::string(field) + "'");
  }
  return value;
}

std::optional<nlp::Status> parse_status(std::string_view field) {
  for (const nlp::Status s :
       {nlp::Status::Converged, nlp::Status::MaxIters, nlp::Status::InfeasibleStationary}) {
    if (nlp::to_string(s) == field) return s;
  }
  if (field == "terminal") return std::nullopt;
  throw InputError("trace csv: unknown solver status '" + std::string(field) + "'");
}

ordered_json summary_json(const sim::Summary& s, bool include_timing) {
  ordered_json out;
  out["min_separation"] = s.min_separation;
  out["min_separation_time"] = s.min_separation_time;
  out["min_inter_sample_separation"] = s.min_inter_sample_separation;
  out["path_length"] = s.path_length;
  out["arrived"] = s.arrived;
  out["arrival_time"] = s.arrival_time ? ordered_json(*s.arrival_time) : ordered_json(nullptr);
  out["violation_count"] = s.violation_count;
  out["max_solver_iterations"] = s.max_solver_iterations;
  out["steps"] = s.steps;
  if (include_timing) {
    out["max_solve_ms"] = s.max_solve_ms;
    out["total_solve_ms"] = s.total_solve_ms;
  }
  return out;
}

ordered_json scenario_header(const sim::ScenarioSpec& spec) {
  ordered_json out;
  out["mode"] = std::string(mpc::to_string(spec.mode));
  out["rho"] = spec.rho;
  out["seed"] = spec.rng_seed;
  return out;
}

}  // namespace

std::string trace_to_csv(const sim::SimTrace& trace) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const sim::StepRecord& r : trace.records) {
    out += std::to_string(r.t);
    for (const double v : {r.own.x, r.own.y, r.own.heading, r.intruder.x, r.intruder.y,
                           r.intruder.heading, r.input.speed, r.input.angular_rate, r.separation}) {
      out += ',';
      append(out, v);
    }
    out += ',';
    out += r.status ? std::string(nlp::to_string(*r.status)) : std::string("terminal");
    out += ',';
    append(out, r.solve_ms);
    out += '\n';
  }
  return out;
}

sim::SimTrace trace_from_csv(std::string_view csv, double rho, double dt, const Pose& target,
                             double target_radius) {
  sim::SimTrace trace;
  trace.rho = rho;
  trace.dt = dt;
  trace.target = target;
  trace.target_radius = target_radius;
  std::vector<std::string_view> lines = split(csv, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != kTraceHeader) throw InputError("trace csv: bad header");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string_view> f = split(lines[i], ',');
    if (f.size() != 12) throw InputError("trace csv: row " + std::to_string(i) + " has wrong width");
    sim::StepRecord r;
    r.t = static_cast<std::size_t>(parse_double(f[0]));
    r.own = {parse_double(f[1]), parse_double(f[2]), parse_double(f[3])};
    r.intruder = {parse_double(f[4]), parse_double(f[5]), parse_double(f[6])};
    r.input = {parse_double(f[7]), parse_double(f[8])};
    r.separation = parse_double(f[9]);
    r.status = parse_status(f[10]);
    r.solve_ms = parse_double(f[11]);
    trace.records.push_back(r);
  }
  return trace;
}

std::string summary_to_json(const sim::ScenarioSpec& spec, const sim::SimTrace& trace,
                            bool include_timing) {
  ordered_json doc = scenario_header(spec);
  doc["outcome"] = std::string(sim::to_string(trace.outcome));
  if (trace.outcome == sim::Outcome::Aborted) doc["abort_reason"] = trace.abort_reason;
  doc["metrics"] = summary_json(sim::metrics(trace), include_timing);
  return doc.dump(2) + "\n";
}

std::string report_to_json(const sim::ScenarioSpec& spec, const sim::MonteCarloReport& report,
                           bool include_timing) {
  ordered_json doc = scenario_header(spec);
  doc["runs"] = report.runs.size();
  ordered_json dist;
  dist["kind"] = spec.disturbance.kind == sim::Disturbance::Kind::Uniform ? "uniform" : "none";
  dist["lo_rad_s"] = spec.disturbance.lo;
  dist["hi_rad_s"] = spec.disturbance.hi;
  doc["disturbance"] = dist;

  const sim::MonteCarloAggregate& a = report.aggregate;
  ordered_json agg;
  agg["min_min_separation"] = a.min_min_separation;
  agg["runs_with_violation"] = a.runs_with_violation;
  agg["total_violation_stages"] = a.total_violation_stages;
  agg["aborted_runs"] = a.aborted_runs;
  agg["arrived_runs"] = a.arrived_runs;
  agg["path_length"] = {{"mean", a.path_length.mean},
                        {"min", a.path_length.min},
                        {"max", a.path_length.max},
                        {"stddev", a.path_length.stddev}};
  agg["intruder_terminal_spread"] = a.intruder_terminal_spread;
  agg["spread_step"] = a.spread_step;
  doc["aggregate"] = agg;

  ordered_json nominal;
  nominal["outcome"] = std::string(sim::to_string(report.nominal.trace.outcome));
  nominal["metrics"] = summary_json(report.nominal.summary, include_timing);
  doc["nominal"] = nominal;

  ordered_json runs = ordered_json::array();
  for (const sim::MonteCarloRun& run : report.runs) {
    ordered_json item;
    item["seed"] = run.seed;
    item["outcome"] = std::string(sim::to_string(run.trace.outcome));
    if (run.trace.outcome == sim::Outcome::Aborted) item["abort_reason"] = run.trace.abort_reason;
    item["metrics"] = summary_json(run.summary, include_timing);
    runs.push_back(item);
  }
  doc["per_run"] = runs;
  return doc.dump(2) + "\n";
}

}  // namespace intent_mpc::io

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

#include "intent_mpc/sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <thread>

#include "intent_mpc/errors.hpp"

namespace intent_mpc::sim {
namespace {

// Closest approach of two points moving linearly from (a0, b0) to (a1, b1).
double segment_min_distance(const Pose& a0, const Pose& a1, const Pose& b0, const Pose& b1) {
  const double rx = b0.x - a0.x;
  const double ry = b0.y - a0.y;
  const double qx = (b1.x - a1.x) - rx;
  const double qy = (b1.y - a1.y) - ry;
  const double qq = qx * qx + qy * qy;
  double s = 0.0;
  if (qq > 0.0) s = std::clamp(-(rx * qx + ry * qy) / qq, 0.0, 1.0);
  return std::hypot(rx + s * qx, ry + s * qy);
}

// Maps a 64-bit draw to [lo, hi] with 53 bits. The standard distributions
// are implementation-defined, which would tie traces to one library.
double to_uniform(std::uint64_t bits, double lo, double hi) {
  const double unit = static_cast<double>(bits >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

}  // namespace

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Arrived: return "arrived";
    case Outcome::MaxSteps: return "max_steps";
    case Outcome::ViolationFlagged: return "violation_flagged";
    case Outcome::Aborted: return "aborted";
  }
  return "?";
}

void ScenarioSpec::validate() const {
  if (!is_finite(own_start) || !is_finite(own_target) || !is_finite(intruder_start) ||
      !is_finite(intruder_target)) {
    throw InputError("scenario poses must be finite");
  }
  if (!(target_radius > 0.0) || !std::isfinite(target_radius)) {
    throw InputError("target_radius must be positive");
  }
  if (max_steps < 1) throw InputError("max_steps must be at least 1");
  if (disturbance.kind == Disturbance::Kind::Uniform &&
      (!std::isfinite(disturbance.lo) || !std::isfinite(disturbance.hi) ||
       disturbance.lo > disturbance.hi)) {
    throw InputError("uniform disturbance needs finite lo <= hi");
  }
  if (!(intruder_bounds.u_max > 0.0)) throw InputError("intruder needs u_max > 0 to turn");
  mpc_config().validate();
}

mpc::Config ScenarioSpec::mpc_config() const {
  mpc::Config config;
  config.horizon = horizon;
  config.robust_horizon = robust_horizon;
  config.dt = dt;
  config.rho = rho;
  config.weights = weights;
  config.own_bounds = own_bounds;
  config.intruder_bounds = intruder_bounds;
  config.mode = mode;
  config.target = own_target;
  return config;
}

double ScenarioSpec::intruder_turn_radius() const {
  return intruder_bounds.v_max / intruder_bounds.u_max;
}

std::vector<double> disturbance_sequence(const Disturbance& disturbance, std::uint64_t seed,
                                         std::size_t count) {
  std::vector<double> draws(count, 0.0);
  if (disturbance.kind == Disturbance::Kind::None) return draws;
  std::mt19937_64 rng(seed);
  for (double& d : draws) d = to_uniform(rng(), disturbance.lo, disturbance.hi);
  return draws;
}

dubins::ControlSchedule intruder_schedule(const ScenarioSpec& spec) {
  const dubins::Path path =
      dubins::shortest_path(spec.intruder_start, spec.intruder_target, spec.intruder_turn_radius());
  return dubins::control_schedule(path, spec.intruder_bounds.v_max, spec.dt);
}

namespace {

ControlInput intruder_input(const ScenarioSpec& spec, const dubins::ControlSchedule& schedule,
                            std::size_t t, double draw) {
  const ControlInput nominal{spec.intruder_bounds.v_max, schedule.rate_at(t)};
  if (spec.disturbance.kind == Disturbance::Kind::None) return nominal;
  return spec.intruder_bounds.clamp({nominal.speed, nominal.angular_rate + draw});
}

}  // namespace

std::vector<Pose> intruder_realization(const ScenarioSpec& spec, std::size_t count) {
  const dubins::ControlSchedule schedule = intruder_schedule(spec);
  const std::vector<double> draws = disturbance_sequence(spec.disturbance, spec.rng_seed, count);
  std::vector<Pose> poses{spec.intruder_start};
  poses.reserve(count + 1);
  for (std::size_t t = 0; t < count; ++t) {
    poses.push_back(step(poses.back(), intruder_input(spec, schedule, t, draws[t]), spec.dt));
  }
  return poses;
}

SimTrace run_closed_loop(const ScenarioSpec& spec, const RunOptions& options) {
  spec.validate();
  const mpc::Config config = spec.mpc_config();
  const dubins::ControlSchedule schedule = intruder_schedule(spec);
  const auto max_steps = static_cast<std::size_t>(spec.max_steps);
  const std::vector<double> draws =
      disturbance_sequence(spec.disturbance, spec.rng_seed, max_steps);

  SimTrace trace;
  trace.rho = spec.rho;
  trace.dt = spec.dt;
  trace.target = spec.own_target;
  trace.target_radius = spec.target_radius;
  trace.records.reserve(max_steps + 1);
  Pose own = spec.own_start;
  Pose intruder = spec.intruder_start;
  std::optional<mpc::Solution> warm;
  std::size_t t = 0;
  for (; t < max_steps; ++t) {
    if (horizontal_distance(own, spec.own_target) <= spec.target_radius) break;
    StepRecord record;
    record.t = t;
    record.own = own;
    record.intruder = intruder;
    record.separation = horizontal_distance(own, intruder);
    try {
      const auto start = std::chrono::steady_clock::now();
      mpc::Solution solution =
          mpc::solve_step(own, intruder, t, schedule, config, warm ? &*warm : nullptr);
      const auto stop = std::chrono::steady_clock::now();
      if (options.record_timing) {
        record.solve_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      }
      record.input = solution.first_input;
      record.status = solution.solver.status;
      record.solver_iterations = solution.solver.inner_iters_total;
      warm = std::move(solution);
    } catch (const NumericalDomainError& e) {
      trace.records.push_back(record);
      trace.outcome = Outcome::Aborted;
      trace.abort_reason = e.what();
      return trace;
    }
    trace.records.push_back(record);
    own = step(own, record.input, spec.dt);
    intruder = step(intruder, intruder_input(spec, schedule, t, draws[t]), spec.dt);
  }

  StepRecord last;
  last.t = t;
  last.own = own;
  last.intruder = intruder;
  last.separation = horizontal_distance(own, intruder);
  trace.records.push_back(last);

  const Summary summary = metrics(trace);
  if (summary.violation_count > 0) {
    trace.outcome = Outcome::ViolationFlagged;
  } else {
    trace.outcome = summary.arrived ? Outcome::Arrived : Outcome::MaxSteps;
  }
  return trace;
}

Summary metrics(const SimTrace& trace) {
  Summary s;
  if (trace.records.empty()) return s;
  s.min_separation = std::numeric_limits<double>::infinity();
  s.min_inter_sample_separation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const StepRecord& r = trace.records[i];
    const double separation = horizontal_distance(r.own, r.intruder);
    if (separation < s.min_separation) {
      s.min_separation = separation;
      s.min_separation_time = r.t;
    }
    if (separation < trace.rho) ++s.violation_count;
    if (r.status) {
      ++s.steps;
      s.path_length += trace.dt * r.input.speed;
      s.max_solver_iterations = std::max(s.max_solver_iterations, r.solver_iterations);
      s.max_solve_ms = std::max(s.max_solve_ms, r.solve_ms);
      s.total_solve_ms += r.solve_ms;
    }
    if (i + 1 < trace.records.size()) {
      const StepRecord& n = trace.records[i + 1];
      s.min_inter_sample_separation = std::min(
          s.min_inter_sample_separation, segment_min_distance(r.own, n.own, r.intruder, n.intruder));
    }
  }
  s.min_inter_sample_separation = std::min(s.min_inter_sample_separation, s.min_separation);
  // Arrival is read off the final pose; the outcome can mask it behind a
  // violation flag.
  const StepRecord& last = trace.records.back();
  if (trace.outcome != Outcome::Aborted &&
      horizontal_distance(last.own, trace.target) <= trace.target_radius) {
    s.arrived = true;
    s.arrival_time = last.t;
  }
  return s;
}

unsigned worker_count() {
  unsigned workers = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("INTENT_MPC_THREADS")) {
    char* end = nullptr;
    const unsigned long value = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) workers = static_cast<unsigned>(value);
  }
  return std::max(1u, workers);
}

MonteCarloReport run_monte_carlo(const ScenarioSpec& spec, std::size_t runs,
                                 const RunOptions& options) {
  if (runs < 1) throw InputError("monte carlo needs at least one run");
  spec.validate();

  MonteCarloReport report;
  ScenarioSpec nominal = spec;
  nominal.disturbance = Disturbance::none();
  report.nominal.seed = spec.rng_seed;
  report.nominal.trace = run_closed_loop(nominal, options);
  report.nominal.summary = metrics(report.nominal.trace);

  report.runs.resize(runs);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < runs; i = next++) {
      ScenarioSpec run_spec = spec;
      run_spec.rng_seed = spec.rng_seed + i;
      MonteCarloRun& run = report.runs[i];
      run.seed = run_spec.rng_seed;
      run.trace = run_closed_loop(run_spec, options);
      run.summary = metrics(run.trace);
    }
  };
  const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(runs));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& th : pool) th.join();

  MonteCarloAggregate& agg = report.aggregate;
  agg.min_min_separation = std::numeric_limits<double>::infinity();
  agg.path_length.min = std::numeric_limits<double>::infinity();
  agg.path_length.max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const MonteCarloRun& run : report.runs) {
    const Summary& s = run.summary;
    agg.min_min_separation = std::min(agg.min_min_separation, s.min_separation);
    if (s.violation_count > 0) ++agg.runs_with_violation;
    agg.total_violation_stages += s.violation_count;
    if (run.trace.outcome == Outcome::Aborted) ++agg.aborted_runs;
    if (s.arrived) ++agg.arrived_runs;
    agg.path_length.min = std::min(agg.path_length.min, s.path_length);
    agg.path_length.max = std::max(agg.path_length.max, s.path_length);
    sum += s.path_length;
  }
  const double n = static_cast<double>(runs);
  agg.path_length.mean = sum / n;
  double squares = 0.0;
  for (const MonteCarloRun& run : report.runs) {
    const double d = run.summary.path_length - agg.path_length.mean;
    squares += d * d;
  }
  agg.path_length.stddev = std::sqrt(squares / n);

  // The intruder does not react to the ownship, so its terminal positions
  // come from the same disturbance streams without rerunning the controller.
  agg.spread_step = intruder_schedule(spec).horizon_steps();
  std::vector<Pose> ends;
  ends.reserve(runs);
  for (const MonteCarloRun& run : report.runs) {
    ScenarioSpec run_spec = spec;
    run_spec.rng_seed = run.seed;
    ends.push_back(intruder_realization(run_spec, agg.spread_step).back());
  }
  for (std::size_t i = 0; i < ends.size(); ++i) {
    for (std::size_t j = i + 1; j < ends.size(); ++j) {
      agg.intruder_terminal_spread =
          std::max(agg.intruder_terminal_spread, horizontal_distance(ends[i], ends[j]));
    }
  }
  return report;
}

}  // namespace intent_mpc::sim

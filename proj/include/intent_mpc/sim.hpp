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

#pragma once

/**
 * @file sim.hpp
 * @brief Closed-loop encounters between the MPC ownship and a Dubins-following
 * intruder, plus seeded Monte-Carlo batches.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "intent_mpc/dubins.hpp"
#include "intent_mpc/dynamics.hpp"
#include "intent_mpc/mpc.hpp"
#include "intent_mpc/nlp_solver.hpp"
#include "intent_mpc/pose.hpp"

namespace intent_mpc::sim {

/// Additive angular-rate noise on the intruder, rad/s.
struct Disturbance {
  enum class Kind { None, Uniform };
  Kind kind = Kind::None;
  double lo = 0.0;
  double hi = 0.0;

  static Disturbance none() { return {}; }
  static Disturbance uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }
};

struct ScenarioSpec {
  Pose own_start;
  Pose own_target;
  double target_radius = 15.0;
  Pose intruder_start;
  Pose intruder_target;
  ControlBounds own_bounds = kOwnshipBounds;
  ControlBounds intruder_bounds = kIntruderBounds;
  double rho = 150.0;
  int horizon = 30;
  int robust_horizon = 3;
  double dt = 1.0;
  mpc::Weights weights;
  mpc::Mode mode = mpc::Mode::ScenarioTree;
  Disturbance disturbance;
  int max_steps = 400;
  std::uint64_t rng_seed = 0;

  void validate() const;
  mpc::Config mpc_config() const;
  /// v_max / u_max of the intruder.
  double intruder_turn_radius() const;
};

struct RunOptions {
  // Wall-clock solve times are the only nondeterministic output; they are
  // recorded as zero unless asked for.
  bool record_timing = false;
};

/// One row per recorded stage. The final row holds the terminal poses and
/// carries no input or solver status.
struct StepRecord {
  std::size_t t = 0;
  Pose own;
  Pose intruder;
  ControlInput input;
  double separation = 0.0;
  std::optional<nlp::Status> status;
  int solver_iterations = 0;  // inner iterations summed over outer iterations
  double solve_ms = 0.0;
};

enum class Outcome { Arrived, MaxSteps, ViolationFlagged, Aborted };

std::string_view to_string(Outcome outcome);

struct Summary {
  double min_separation = 0.0;
  std::size_t min_separation_time = 0;
  // Separation minimized over the continuous segment between stages.
  double min_inter_sample_separation = 0.0;
  double path_length = 0.0;
  bool arrived = false;
  std::optional<std::size_t> arrival_time;
  std::size_t violation_count = 0;
  int max_solver_iterations = 0;
  std::size_t steps = 0;  // applied inputs
  double max_solve_ms = 0.0;
  double total_solve_ms = 0.0;
};

struct SimTrace {
  std::vector<StepRecord> records;
  Outcome outcome = Outcome::MaxSteps;
  std::string abort_reason;  // set when outcome is Aborted
  double rho = 0.0;
  double dt = 1.0;
  Pose target;
  double target_radius = 0.0;
};

/// Seeded additive disturbance draws for steps 0..count-1.
std::vector<double> disturbance_sequence(const Disturbance& disturbance, std::uint64_t seed,
                                         std::size_t count);

/// The intruder's open-loop nominal schedule, planned once from its start pose.
dubins::ControlSchedule intruder_schedule(const ScenarioSpec& spec);

/// Intruder poses for steps 0..count under the scenario's disturbance stream,
/// identical to the ones a closed-loop run records.
std::vector<Pose> intruder_realization(const ScenarioSpec& spec, std::size_t count);

/// Runs one encounter. Numerical domain failures end the run with the
/// partial trace and outcome Aborted.
SimTrace run_closed_loop(const ScenarioSpec& spec, const RunOptions& options = {});

/// Recomputes every metric from the recorded stages.
Summary metrics(const SimTrace& trace);

struct MonteCarloRun {
  std::uint64_t seed = 0;
  SimTrace trace;
  Summary summary;
};

struct PathLengthStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double stddev = 0.0;
};

struct MonteCarloAggregate {
  double min_min_separation = 0.0;
  std::size_t runs_with_violation = 0;
  std::size_t total_violation_stages = 0;
  std::size_t aborted_runs = 0;
  std::size_t arrived_runs = 0;
  PathLengthStats path_length;
  // Largest pairwise distance between intruder positions at the step the
  // nominal schedule ends, over all disturbed runs.
  double intruder_terminal_spread = 0.0;
  std::size_t spread_step = 0;
};

struct MonteCarloReport {
  MonteCarloRun nominal;  // same scenario with the disturbance removed
  std::vector<MonteCarloRun> runs;
  MonteCarloAggregate aggregate;
};

/// Runs `runs` disturbed encounters with seeds rng_seed + index, in parallel
/// up to INTENT_MPC_THREADS workers (0 or unset means hardware concurrency).
/// The report does not depend on scheduling.
MonteCarloReport run_monte_carlo(const ScenarioSpec& spec, std::size_t runs,
                                 const RunOptions& options = {});

/// Worker count honoring INTENT_MPC_THREADS.
unsigned worker_count();

}  // namespace intent_mpc::sim

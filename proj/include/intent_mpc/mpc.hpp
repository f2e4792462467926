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
 * @file mpc.hpp
 * @brief Intent-aware scenario-tree MPC for the ownship.
 *
 * Each receding-horizon instance is transcribed by single shooting: the
 * decision vector is z = (u_0..u_{N-1}, v_0..v_{N-1}) and ownship states are
 * eliminated by rollout. Separation constraints are posed on squared
 * horizontal distance against every predicted intruder scenario:
 *
 *   rho^2 - (x_k - x^j_k)^2 - (y_k - y^j_k)^2 <= 0,   k = 0..N, j = 1..M.
 *
 * Modes differ only in the intruder prediction: the full tree (M = 3^{N_r}),
 * the nominal intent path alone (Classic), a straight-line intruder
 * (NoIntent), or no constraints at all (Unconstrained).
 */

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "intent_mpc/dubins.hpp"
#include "intent_mpc/dynamics.hpp"
#include "intent_mpc/nlp_solver.hpp"
#include "intent_mpc/pose.hpp"

namespace intent_mpc::mpc {

enum class Mode { ScenarioTree, Classic, NoIntent, Unconstrained };

std::string_view to_string(Mode mode);
std::optional<Mode> mode_from_string(std::string_view name);

struct Weights {
  Eigen::Matrix3d Q = Eigen::Vector3d(0.01, 0.01, 0.0).asDiagonal();  // stage
  Eigen::Matrix3d Qf = Eigen::Vector3d(1.0, 1.0, 10.0).asDiagonal();  // terminal
  double R = 100.0;  // penalty on successive angular-rate changes

  /// Q symmetric PSD, Qf symmetric PD, R > 0.
  void validate() const;
};

struct Config {
  int horizon = 30;
  int robust_horizon = 3;
  double dt = 1.0;
  double rho = 150.0;  // minimum horizontal separation, m
  Weights weights;
  ControlBounds own_bounds = kOwnshipBounds;
  ControlBounds intruder_bounds = kIntruderBounds;
  Mode mode = Mode::ScenarioTree;
  Pose target;
  // With v_min > 0 the ownship cannot hold a point. When the target is
  // closer than the shortest horizon path, track a point beyond it on the
  // line of sight so plans fly through the target instead of looping back.
  bool pass_through = true;
  // Also start the solver from constant hard-left and hard-right turns and
  // keep the best result; single starts tend to lock into one side of the
  // intruder for good.
  bool multi_start = true;
  // Separation constraints are normalized by rho^2; 1e-6 keeps the realized
  // separation within ~1e-4 m of rho.
  nlp::SolverConfig solver = [] {
    nlp::SolverConfig c;
    c.constraint_tol = 1e-6;
    return c;
  }();

  void validate() const;
};

/// One transcribed receding-horizon instance.
struct Instance {
  nlp::Problem problem;
  ScenarioTree tree;        // empty in Unconstrained mode
  double cost_scale = 1.0;  // problem.objective = cost / cost_scale
};

/// Pose the cost tracks from `own_now`: the target itself, or with
/// pass_through the point v_min * N * dt away along the line of sight
/// through the target once the target is nearer than that.
Pose tracking_reference(const Pose& own_now, const Config& config);

/// The intruder prediction tree used by `mode` at absolute step `t`.
ScenarioTree predict_intruder(const Pose& intruder_now, std::size_t t,
                              const dubins::ControlSchedule& intent, const Config& config);

Instance build_problem(const Pose& own_now, const Pose& intruder_now, std::size_t t,
                       const dubins::ControlSchedule& intent, const Config& config);

struct Solution {
  std::size_t t = 0;              // absolute step this instance was solved at
  ControlInput first_input;       // applied action, inside own_bounds
  std::vector<ControlInput> inputs;
  std::vector<Pose> own_predicted;  // N + 1 poses
  ScenarioTree intruder_scenarios;
  nlp::Result solver;
  double cost_value = 0.0;
};

/// Solves the instance at step `t`. A warm start is shifted by t - warm->t
/// stages (drop the head, repeat the final stage). The solver also starts
/// from u = 0, v = v_max and, with multi_start, from both saturated turns;
/// the best feasible result wins, ties going to the earlier start.
Solution solve_step(const Pose& own_now, const Pose& intruder_now, std::size_t t,
                    const dubins::ControlSchedule& intent, const Config& config,
                    const Solution* warm = nullptr);

/// Packs control sequences into the decision-vector layout.
nlp::Vector pack(std::span<const ControlInput> inputs);
std::vector<ControlInput> unpack(const nlp::Vector& z);

}  // namespace intent_mpc::mpc

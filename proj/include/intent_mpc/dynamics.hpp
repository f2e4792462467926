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

#include <cstddef>
#include <span>
#include <vector>

#include "intent_mpc/dubins.hpp"
#include "intent_mpc/pose.hpp"

namespace intent_mpc {

struct ControlInput {
  double speed = 0.0;         // m/s
  double angular_rate = 0.0;  // rad/s

  bool operator==(const ControlInput&) const = default;
};

struct ControlBounds {
  double v_min = 0.0;
  double v_max = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;

  void validate() const;
  ControlInput clamp(const ControlInput& in) const;
  bool contains(const ControlInput& in) const;
};

/// Ownship action space: [6, 9] m/s × [-0.1, 0.1] rad/s.
inline constexpr ControlBounds kOwnshipBounds{6.0, 9.0, -0.1, 0.1};
/// Intruder action space: 10 m/s × [-0.07, 0.07] rad/s.
inline constexpr ControlBounds kIntruderBounds{10.0, 10.0, -0.07, 0.07};

/// Euler update of the planar kinematics with the pre-update heading.
/// The heading is not wrapped.
Pose step(const Pose& state, const ControlInput& input, double dt);

/// Iterated `step`; element 0 is `initial`, so the result has inputs.size()+1 poses.
std::vector<Pose> rollout(const Pose& initial, std::span<const ControlInput> inputs, double dt);

enum class Branch : int { Upper = 0, Lower = 1, Nominal = 2 };

struct TreeShape {
  int branching = 3;       // m
  int robust_horizon = 3;  // N_r
  int horizon = 30;        // N

  void validate() const;
  /// M = m^{N_r}.
  std::size_t num_scenarios() const;
};

/// Branch taken by scenario `j` (1-based) at stage `k`:
/// ((⌈j / m^{N_r-1-k}⌉ - 1) mod m) for k < N_r, nominal afterwards.
Branch branch_index(std::size_t j, int k, const TreeShape& shape);

/// Intruder futures over the prediction horizon. Scenario j (0-based storage)
/// has `horizon` controls and `horizon + 1` poses rooted at the current pose.
struct ScenarioTree {
  TreeShape shape;
  std::vector<std::vector<ControlInput>> control_sequences;
  std::vector<std::vector<Pose>> trajectories;

  std::size_t size() const { return trajectories.size(); }
};

/// Enumerates the intruder's angular-rate branches {upper, lower, nominal}
/// over the robust horizon, nominal (`nominal.rate_at(t + k)`) afterwards, at
/// constant speed `bounds.v_max`.
ScenarioTree build_scenario_tree(const Pose& intruder_now, const dubins::ControlSchedule& nominal,
                                 std::size_t t, const ControlBounds& bounds,
                                 const TreeShape& shape, double dt);

}  // namespace intent_mpc

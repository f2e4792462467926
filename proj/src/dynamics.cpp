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

#include "intent_mpc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "intent_mpc/errors.hpp"

namespace intent_mpc {

void ControlBounds::validate() const {
  const bool finite = std::isfinite(v_min) && std::isfinite(v_max) && std::isfinite(u_min) &&
                      std::isfinite(u_max);
  if (!finite || !(v_min > 0.0) || v_min > v_max || u_min > u_max) {
    throw InputError("control bounds need 0 < v_min <= v_max and u_min <= u_max");
  }
}

ControlInput ControlBounds::clamp(const ControlInput& in) const {
  return {std::clamp(in.speed, v_min, v_max), std::clamp(in.angular_rate, u_min, u_max)};
}

bool ControlBounds::contains(const ControlInput& in) const {
  return in.speed >= v_min && in.speed <= v_max && in.angular_rate >= u_min &&
         in.angular_rate <= u_max;
}

Pose step(const Pose& state, const ControlInput& input, double dt) {
  return {state.x + dt * input.speed * std::cos(state.heading),
          state.y + dt * input.speed * std::sin(state.heading),
          state.heading + dt * input.angular_rate};
}

std::vector<Pose> rollout(const Pose& initial, std::span<const ControlInput> inputs, double dt) {
  std::vector<Pose> poses;
  poses.reserve(inputs.size() + 1);
  poses.push_back(initial);
  for (const ControlInput& in : inputs) poses.push_back(step(poses.back(), in, dt));
  return poses;
}

void TreeShape::validate() const {
  if (branching < 1 || robust_horizon < 0 || horizon < 1 || robust_horizon > horizon) {
    throw InputError("tree shape needs m >= 1 and 0 <= N_r <= N, N >= 1");
  }
}

std::size_t TreeShape::num_scenarios() const {
  std::size_t count = 1;
  for (int i = 0; i < robust_horizon; ++i) count *= static_cast<std::size_t>(branching);
  return count;
}

Branch branch_index(std::size_t j, int k, const TreeShape& shape) {
  const std::size_t scenarios = shape.num_scenarios();
  if (j < 1 || j > scenarios) {
    throw InputError("branch_index: scenario " + std::to_string(j) + " outside 1.." +
                     std::to_string(scenarios));
  }
  if (k < 0 || k >= shape.horizon) {
    throw InputError("branch_index: stage " + std::to_string(k) + " outside 0.." +
                     std::to_string(shape.horizon - 1));
  }
  if (k >= shape.robust_horizon) return Branch::Nominal;

  const auto m = static_cast<std::size_t>(shape.branching);
  std::size_t block = 1;  // m^{N_r-1-k}
  for (int i = 0; i < shape.robust_horizon - 1 - k; ++i) block *= m;
  const std::size_t ceil_div = (j + block - 1) / block;
  return static_cast<Branch>((ceil_div - 1) % m);
}

ScenarioTree build_scenario_tree(const Pose& intruder_now, const dubins::ControlSchedule& nominal,
                                 std::size_t t, const ControlBounds& bounds,
                                 const TreeShape& shape, double dt) {
  shape.validate();
  if (shape.robust_horizon > 0 && shape.branching != 3) {
    throw InputError("scenario tree: branch set {upper, lower, nominal} needs m = 3");
  }
  const std::size_t scenarios = shape.num_scenarios();
  const auto horizon = static_cast<std::size_t>(shape.horizon);

  ScenarioTree tree;
  tree.shape = shape;
  tree.control_sequences.reserve(scenarios);
  tree.trajectories.reserve(scenarios);
  for (std::size_t j = 1; j <= scenarios; ++j) {
    std::vector<ControlInput> controls(horizon);
    for (std::size_t k = 0; k < horizon; ++k) {
      double rate = 0.0;
      switch (branch_index(j, static_cast<int>(k), shape)) {
        case Branch::Upper: rate = bounds.u_max; break;
        case Branch::Lower: rate = bounds.u_min; break;
        case Branch::Nominal: rate = nominal.rate_at(t + k); break;
      }
      controls[k] = {bounds.v_max, rate};
    }
    tree.trajectories.push_back(rollout(intruder_now, controls, dt));
    tree.control_sequences.push_back(std::move(controls));
  }
  return tree;
}

}  // namespace intent_mpc

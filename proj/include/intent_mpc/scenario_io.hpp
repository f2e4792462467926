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
 * @file scenario_io.hpp
 * @brief Strict JSON scenario files.
 *
 * Every key is required (the disturbance bounds only for kind "uniform") and
 * unknown keys are rejected, so a typo cannot fall back to a default. Poses
 * are [x, y, heading] in meters and radians; disturbance bounds are in
 * degrees per second.
 *
 *   {
 *     "ownship":  {"start": [0, 0, 0], "target": [1800, 0, 0],
 *                  "bounds": {"v": [6, 9], "u": [-0.1, 0.1]}},
 *     "intruder": {"start": [...], "target": [...],
 *                  "bounds": {"v": [10, 10], "u": [-0.07, 0.07]}},
 *     "mpc": {"N": 30, "N_r": 3, "Q": [0.01, 0.01, 0], "Qf": [1, 1, 10],
 *             "R": 100, "rho": 150, "mode": "scenario-tree"},
 *     "disturbance": {"kind": "uniform", "lo_deg_s": -0.5, "hi_deg_s": 0.5},
 *     "sim": {"max_steps": 400, "target_radius": 15, "seed": 42}
 *   }
 */

#include <filesystem>
#include <string>
#include <string_view>

#include "intent_mpc/sim.hpp"

namespace intent_mpc::io {

/// Parses and validates a scenario document. Throws SchemaError naming the
/// dotted path of the first offending field.
sim::ScenarioSpec parse_scenario(std::string_view text);

/// Reads `path` and parses it; an unreadable file is a SchemaError at "".
sim::ScenarioSpec load_scenario(const std::filesystem::path& path);

/// Serializes a scenario in the same schema. Weight matrices must be diagonal.
std::string scenario_to_json(const sim::ScenarioSpec& spec);

}  // namespace intent_mpc::io

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
 * @file trace_io.hpp
 * @brief CSV traces and JSON summaries.
 *
 * Floats are written with 9 significant digits and LF line endings. The
 * final CSV row of a trace holds the terminal poses with v = u = 0 and
 * solver_status "terminal".
 */

#include <string>
#include <string_view>

#include "intent_mpc/sim.hpp"

namespace intent_mpc::io {

inline constexpr const char* kTraceHeader =
    "t,own_x,own_y,own_heading,intr_x,intr_y,intr_heading,v,u,separation,solver_status,solve_ms";

std::string trace_to_csv(const sim::SimTrace& trace);

/// Parses trace_to_csv output. rho, dt, target and target_radius are not in
/// the CSV and must be supplied for metrics to be meaningful.
sim::SimTrace trace_from_csv(std::string_view csv, double rho, double dt, const Pose& target,
                             double target_radius);

/// summary.json for one run.
std::string summary_to_json(const sim::ScenarioSpec& spec, const sim::SimTrace& trace,
                            bool include_timing);

/// report.json for a Monte-Carlo batch.
std::string report_to_json(const sim::ScenarioSpec& spec, const sim::MonteCarloReport& report,
                           bool include_timing);

}  // namespace intent_mpc::io

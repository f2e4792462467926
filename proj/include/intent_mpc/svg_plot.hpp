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
 * @file svg_plot.hpp
 * @brief Self-contained SVG plots of closed-loop runs.
 *
 * Output depends only on the inputs: coordinates are printed with fixed
 * precision and nothing external is referenced.
 */

#include <string>

#include "intent_mpc/sim.hpp"

namespace intent_mpc::plot {

/// Ownship blue, intruder red, target disc green, dashed rho circle around
/// the intruder at closest approach.
std::string trajectory_svg(const sim::SimTrace& trace, const sim::ScenarioSpec& spec);

/// Separation over time with rho dashed.
std::string distance_svg(const sim::SimTrace& trace, double rho);

/// Speed and angular rate over time with their bounds.
std::string controls_svg(const sim::SimTrace& trace, const ControlBounds& bounds);

/// Monte-Carlo overlays: every realization thin (intruder red, ownship
/// blue), the disturbance-free nominal run black.
std::string overlay_trajectory_svg(const sim::MonteCarloReport& report,
                                   const sim::ScenarioSpec& spec);
std::string overlay_distance_svg(const sim::MonteCarloReport& report, double rho);
std::string overlay_controls_svg(const sim::MonteCarloReport& report, const ControlBounds& bounds);

}  // namespace intent_mpc::plot

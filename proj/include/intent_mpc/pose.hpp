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

#include <cmath>
#include <numbers>

namespace intent_mpc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Planar aircraft state. Heading is measured counter-clockwise from +x and
/// may accumulate past ±π; compare headings with `wrap_angle`.
struct Pose {
  double x = 0.0;        // m
  double y = 0.0;        // m
  double heading = 0.0;  // rad

  bool operator==(const Pose&) const = default;
};

/// Maps an angle into (-π, π].
inline double wrap_angle(double a) {
  double w = std::remainder(a, kTwoPi);  // [-π, π]
  if (w <= -kPi) w += kTwoPi;
  return w;
}

/// Maps an angle into [0, 2π).
inline double wrap_two_pi(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

inline double horizontal_distance(const Pose& a, const Pose& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline bool is_finite(const Pose& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.heading);
}

}  // namespace intent_mpc

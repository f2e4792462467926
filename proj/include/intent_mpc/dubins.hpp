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
 * @file dubins.hpp
 * @brief Shortest curvature-bounded paths between oriented poses, and their
 *        discretization into per-step angular-rate schedules.
 *
 * A Dubins path is three segments, each a left arc (L), straight (S) or
 * right arc (R). Arcs are flown at the minimum turn radius. The schedule
 * produced by `control_schedule` is the intent mapping used to predict an
 * intruder's future angular rates from its current pose and waypoint.
 */

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "intent_mpc/pose.hpp"

namespace intent_mpc::dubins {

enum class SegmentKind { Left, Straight, Right };

/// The six Dubins words, in tie-break order.
enum class Word { LSL, RSR, LSR, RSL, RLR, LRL };

inline constexpr std::array<Word, 6> kAllWords = {Word::LSL, Word::RSR, Word::LSR,
                                                  Word::RSL, Word::RLR, Word::LRL};

std::array<SegmentKind, 3> segments_of(Word word);
std::string_view to_string(Word word);
std::optional<Word> word_from_string(std::string_view name);

struct Path {
  Word word = Word::LSL;
  Pose start;
  Pose goal;
  double turn_radius = 1.0;
  std::array<double, 3> seg_lengths{};  // m
  double total_length = 0.0;            // m
};

/// Angular-rate schedule that flies a path at constant speed.
struct ControlSchedule {
  double speed = 0.0;                 // m/s
  double dt = 1.0;                    // s
  std::vector<double> angular_rates;  // rad/s, one per step

  std::size_t horizon_steps() const { return angular_rates.size(); }

  /// Rate at absolute step k; zero (straight flight) past the end.
  double rate_at(std::size_t k) const {
    return k < angular_rates.size() ? angular_rates[k] : 0.0;
  }
};

/// The path of the given word, or nullopt if the word cannot connect the
/// poses. For CCC words with two geometric solutions the shorter is returned.
std::optional<Path> solve_word(const Pose& start, const Pose& goal, double turn_radius,
                               Word word);

/// Shortest path over all six words; equal lengths resolve in `kAllWords` order.
Path shortest_path(const Pose& start, const Pose& goal, double turn_radius);

/// Closed-form pose at the given arclength. Heading is unwrapped from
/// `path.start.heading`.
Pose sample_pose(const Path& path, double arclength);

/// Unwrapped heading at the given arclength (clamped to the path).
double heading_at(const Path& path, double arclength);

/// Per-step time-averaged angular rates: step k covers arclength
/// [k·v·dt, (k+1)·v·dt], so headings at step boundaries are exact.
ControlSchedule control_schedule(const Path& path, double speed, double dt);

}  // namespace intent_mpc::dubins

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

#include "intent_mpc/dubins.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "intent_mpc/errors.hpp"

namespace intent_mpc::dubins {
namespace {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
double norm(Vec2 a) { return std::hypot(a.x, a.y); }
double angle_of(Vec2 a) { return std::atan2(a.y, a.x); }

// Centers of the minimum-radius turning circles tangent to a pose.
Vec2 left_center(const Pose& p, double r) {
  return {p.x - r * std::sin(p.heading), p.y + r * std::cos(p.heading)};
}
Vec2 right_center(const Pose& p, double r) {
  return {p.x + r * std::sin(p.heading), p.y - r * std::cos(p.heading)};
}

// Arc sweep in [0, 2π); sweeps within kSnap of a full turn are zero turns.
constexpr double kSnap = 1e-10;
double sweep(double a) {
  const double w = wrap_two_pi(a);
  return (kTwoPi - w < kSnap) ? 0.0 : w;
}

double curvature_sign(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::Left: return 1.0;
    case SegmentKind::Right: return -1.0;
    case SegmentKind::Straight: return 0.0;
  }
  return 0.0;
}

Pose advance(const Pose& p, SegmentKind kind, double s, double r) {
  if (kind == SegmentKind::Straight) {
    return {p.x + s * std::cos(p.heading), p.y + s * std::sin(p.heading), p.heading};
  }
  const double sign = curvature_sign(kind);
  const double h1 = p.heading + sign * s / r;
  return {p.x + sign * r * (std::sin(h1) - std::sin(p.heading)),
          p.y - sign * r * (std::cos(h1) - std::cos(p.heading)), h1};
}

Path make_path(Word word, const Pose& start, const Pose& goal, double r, double t, double p,
               double q) {
  Path path;
  path.word = word;
  path.start = start;
  path.goal = goal;
  path.turn_radius = r;
  path.seg_lengths = {t, p, q};
  path.total_length = t + p + q;
  return path;
}

// Arc-straight-arc. `first`/`last` are the arc directions.
std::optional<Path> solve_csc(const Pose& s0, const Pose& s1, double r, Word word,
                              SegmentKind first, SegmentKind last) {
  const Vec2 c0 = first == SegmentKind::Left ? left_center(s0, r) : right_center(s0, r);
  const Vec2 c1 = last == SegmentKind::Left ? left_center(s1, r) : right_center(s1, r);
  const Vec2 delta = c1 - c0;
  const double dist = norm(delta);
  const double sign0 = curvature_sign(first);
  const double sign1 = curvature_sign(last);

  double straight = 0.0;
  double phi = 0.0;  // heading along the straight segment
  if (first == last) {
    if (dist < 1e-9 * std::max(1.0, r)) {
      // Shared circle: a single arc.
      const double turn = sweep(sign0 * (s1.heading - s0.heading));
      return make_path(word, s0, s1, r, r * turn, 0.0, 0.0);
    }
    straight = dist;
    phi = angle_of(delta);
  } else {
    // Inner tangent: delta = straight·e(phi) - sign0·2r·n(phi), n the left normal.
    const double gap = dist * dist - 4.0 * r * r;
    if (gap < -1e-9 * r * r) return std::nullopt;
    straight = std::sqrt(std::max(0.0, gap));
    phi = angle_of(delta) + sign0 * std::atan2(2.0 * r, straight);
  }
  const double t = sweep(sign0 * (phi - s0.heading));
  const double q = sweep(sign1 * (s1.heading - phi));
  return make_path(word, s0, s1, r, r * t, straight, r * q);
}

// Arc-arc-arc with the middle arc turning opposite to the outer ones.
std::optional<Path> solve_ccc(const Pose& s0, const Pose& s1, double r, Word word,
                              SegmentKind outer) {
  const bool left = outer == SegmentKind::Left;
  const Vec2 c0 = left ? left_center(s0, r) : right_center(s0, r);
  const Vec2 c2 = left ? left_center(s1, r) : right_center(s1, r);
  const Vec2 delta = c2 - c0;
  const double dist = norm(delta);
  if (dist > 4.0 * r * (1.0 + 1e-12)) return std::nullopt;

  const double sign = curvature_sign(outer);
  const double theta = angle_of(delta);
  const double gamma = std::acos(std::clamp(dist / (4.0 * r), -1.0, 1.0));

  std::optional<Path> best;
  for (const double side : {1.0, -1.0}) {
    const double a01 = theta + side * gamma;  // direction c0 -> middle center
    const Vec2 cm = c0 + 2.0 * r * Vec2{std::cos(a01), std::sin(a01)};
    const double am2 = angle_of(c2 - cm);
    // Heading on a circle at the point in direction `a` from its center is
    // a + π/2 turning left, a - π/2 turning right.
    const double h_a = a01 + sign * kPi / 2.0;
    const double h_b = am2 - sign * kPi / 2.0;
    const double t = sweep(sign * (h_a - s0.heading));
    const double p = sweep(-sign * (h_b - h_a));
    const double q = sweep(sign * (s1.heading - h_b));
    Path candidate = make_path(word, s0, s1, r, r * t, r * p, r * q);
    if (!best || candidate.total_length < best->total_length) best = candidate;
  }
  return best;
}

void require_valid(const Pose& start, const Pose& goal, double turn_radius) {
  if (!(turn_radius > 0.0) || !std::isfinite(turn_radius)) {
    throw InputError("dubins: turn radius must be positive and finite");
  }
  if (!is_finite(start) || !is_finite(goal)) {
    throw InputError("dubins: poses must be finite");
  }
}

}  // namespace

std::array<SegmentKind, 3> segments_of(Word word) {
  using enum SegmentKind;
  switch (word) {
    case Word::LSL: return {Left, Straight, Left};
    case Word::RSR: return {Right, Straight, Right};
    case Word::LSR: return {Left, Straight, Right};
    case Word::RSL: return {Right, Straight, Left};
    case Word::RLR: return {Right, Left, Right};
    case Word::LRL: return {Left, Right, Left};
  }
  return {Straight, Straight, Straight};
}

std::string_view to_string(Word word) {
  switch (word) {
    case Word::LSL: return "LSL";
    case Word::RSR: return "RSR";
    case Word::LSR: return "LSR";
    case Word::RSL: return "RSL";
    case Word::RLR: return "RLR";
    case Word::LRL: return "LRL";
  }
  return "?";
}

std::optional<Word> word_from_string(std::string_view name) {
  for (const Word w : kAllWords) {
    if (to_string(w) == name) return w;
  }
  return std::nullopt;
}

std::optional<Path> solve_word(const Pose& start, const Pose& goal, double turn_radius,
                               Word word) {
  require_valid(start, goal, turn_radius);
  using enum SegmentKind;
  switch (word) {
    case Word::LSL: return solve_csc(start, goal, turn_radius, word, Left, Left);
    case Word::RSR: return solve_csc(start, goal, turn_radius, word, Right, Right);
    case Word::LSR: return solve_csc(start, goal, turn_radius, word, Left, Right);
    case Word::RSL: return solve_csc(start, goal, turn_radius, word, Right, Left);
    case Word::RLR: return solve_ccc(start, goal, turn_radius, word, Right);
    case Word::LRL: return solve_ccc(start, goal, turn_radius, word, Left);
  }
  return std::nullopt;
}

Path shortest_path(const Pose& start, const Pose& goal, double turn_radius) {
  std::optional<Path> best;
  for (const Word w : kAllWords) {
    auto candidate = solve_word(start, goal, turn_radius, w);
    if (candidate && (!best || candidate->total_length < best->total_length)) {
      best = std::move(candidate);
    }
  }
  if (!best) {
    throw std::logic_error("dubins: no feasible word between finite poses");
  }
  return *best;
}

Pose sample_pose(const Path& path, double arclength) {
  if (!(arclength >= 0.0) || arclength > path.total_length + 1e-9) {
    throw InputError("dubins: arclength " + std::to_string(arclength) +
                     " outside [0, " + std::to_string(path.total_length) + "]");
  }
  const auto kinds = segments_of(path.word);
  Pose pose = path.start;
  double remaining = arclength;
  for (std::size_t i = 0; i < 3 && remaining > 0.0; ++i) {
    const double s = std::min(remaining, path.seg_lengths[i]);
    pose = advance(pose, kinds[i], s, path.turn_radius);
    remaining -= s;
  }
  return pose;
}

double heading_at(const Path& path, double arclength) {
  const auto kinds = segments_of(path.word);
  double heading = path.start.heading;
  double remaining = std::clamp(arclength, 0.0, path.total_length);
  for (std::size_t i = 0; i < 3 && remaining > 0.0; ++i) {
    const double s = std::min(remaining, path.seg_lengths[i]);
    heading += curvature_sign(kinds[i]) * s / path.turn_radius;
    remaining -= s;
  }
  return heading;
}

ControlSchedule control_schedule(const Path& path, double speed, double dt) {
  if (!(speed > 0.0) || !(dt > 0.0)) {
    throw InputError("dubins: schedule needs positive speed and dt");
  }
  ControlSchedule schedule;
  schedule.speed = speed;
  schedule.dt = dt;
  const double step_length = speed * dt;
  const auto steps =
      static_cast<std::size_t>(std::ceil(path.total_length / step_length - 1e-9));
  schedule.angular_rates.reserve(steps);
  double previous = heading_at(path, 0.0);
  for (std::size_t k = 0; k < steps; ++k) {
    const double next = heading_at(path, static_cast<double>(k + 1) * step_length);
    schedule.angular_rates.push_back((next - previous) / dt);
    previous = next;
  }
  return schedule;
}

}  // namespace intent_mpc::dubins

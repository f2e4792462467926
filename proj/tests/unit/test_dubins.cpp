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

#include <cmath>
#include <random>

#include "doctest.h"
#include "intent_mpc/dubins.hpp"
#include "intent_mpc/errors.hpp"
#include "oracles/dubins_oracle.hpp"

using namespace intent_mpc;
using dubins::Word;

namespace {

constexpr double kRadius = 142.857;

Pose random_pose(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(0.0, 1000.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  return {pos(rng), pos(rng), ang(rng)};
}

}  // namespace

TEST_CASE("collinear poses give a straight LSL") {
  const auto path = dubins::solve_word({0, 0, 0}, {200, 0, 0}, 100.0, Word::LSL);
  REQUIRE(path);
  CHECK(path->seg_lengths[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(path->seg_lengths[1] == doctest::Approx(200.0));
  CHECK(path->seg_lengths[2] == doctest::Approx(0.0).epsilon(1e-12));

  const auto best = dubins::shortest_path({0, 0, 0}, {200, 0, 0}, 100.0);
  CHECK(best.word == Word::LSL);
  CHECK(best.total_length == doctest::Approx(200.0));
}

TEST_CASE("goal across the left circle is a semicircle") {
  const auto path = dubins::solve_word({0, 0, 0}, {0, 200, kPi}, 100.0, Word::LSL);
  REQUIRE(path);
  CHECK(path->seg_lengths[0] == doctest::Approx(100.0 * kPi));
  CHECK(std::abs(path->seg_lengths[1]) < 1e-9);
  CHECK(std::abs(path->seg_lengths[2]) < 1e-9);
  CHECK(path->total_length == doctest::Approx(314.159).epsilon(1e-5));
}

TEST_CASE("identity pose pair has zero length") {
  const auto path = dubins::shortest_path({0, 0, 0}, {0, 0, 0}, 100.0);
  CHECK(path.total_length == doctest::Approx(0.0));
}

TEST_CASE("RLR segments agree with the brute-force oracle") {
  const Pose start{0, 0, 0};
  const Pose goal{50, 30, 1.0};
  const auto path = dubins::solve_word(start, goal, kRadius, Word::RLR);
  const auto ref = oracle::solve_word(start, goal, kRadius, Word::RLR);
  REQUIRE(path);
  REQUIRE(ref);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(path->seg_lengths[i] - ref->seg[i]) < 1e-4);
}

TEST_CASE("every word agrees with the oracle on random pairs") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100; ++i) {
    const Pose a = random_pose(rng);
    const Pose b = random_pose(rng);
    const auto best = dubins::shortest_path(a, b, kRadius);
    for (Word w : dubins::kAllWords) {
      const auto path = dubins::solve_word(a, b, kRadius, w);
      const auto ref = oracle::solve_word(a, b, kRadius, w);
      CAPTURE(i);
      CAPTURE(dubins::to_string(w));
      REQUIRE(path.has_value() == ref.has_value());
      if (!path) continue;
      CHECK(std::abs(path->total_length - ref->total) < 1e-4);
      CHECK(best.total_length <= path->total_length + 1e-9);
    }
  }
}

TEST_CASE("length is invariant under rigid motion") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int i = 0; i < 50; ++i) {
    const Pose a = random_pose(rng);
    const Pose b = random_pose(rng);
    const double th = ang(rng);
    const double c = std::cos(th);
    const double s = std::sin(th);
    auto move = [&](const Pose& p) {
      return Pose{c * p.x - s * p.y + 37.0, s * p.x + c * p.y - 11.0, p.heading + th};
    };
    const double l0 = dubins::shortest_path(a, b, kRadius).total_length;
    const double l1 = dubins::shortest_path(move(a), move(b), kRadius).total_length;
    CHECK(l1 == doctest::Approx(l0).epsilon(1e-9));
  }
}

TEST_CASE("sample_pose endpoints and straight interior") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const Pose a = random_pose(rng);
    const Pose b = random_pose(rng);
    const auto path = dubins::shortest_path(a, b, kRadius);
    const Pose p0 = dubins::sample_pose(path, 0.0);
    CHECK(p0.x == doctest::Approx(a.x));
    CHECK(p0.y == doctest::Approx(a.y));
    CHECK(std::abs(wrap_angle(p0.heading - a.heading)) < 1e-12);
    const Pose p1 = dubins::sample_pose(path, path.total_length);
    CHECK(horizontal_distance(p1, b) < 1e-6);
    CHECK(std::abs(wrap_angle(p1.heading - b.heading)) < 1e-9);
  }

  const auto straight = dubins::shortest_path({0, 0, 0}, {200, 0, 0}, 100.0);
  const Pose mid = dubins::sample_pose(straight, 50.0);
  CHECK(mid.x == doctest::Approx(50.0));
  CHECK(mid.y == doctest::Approx(0.0));
  CHECK(mid.heading == doctest::Approx(0.0));

  CHECK_THROWS_AS(dubins::sample_pose(straight, -1.0), InputError);
  CHECK_THROWS_AS(dubins::sample_pose(straight, 201.0), InputError);
}

TEST_CASE("schedules") {
  SUBCASE("semicircle flown at 0.1 rad/s") {
    const auto path = dubins::solve_word({0, 0, 0}, {0, 200, kPi}, 100.0, Word::LSL);
    const auto sched = dubins::control_schedule(*path, 10.0, 1.0);
    REQUIRE(sched.horizon_steps() == 32);  // ceil(100 pi / 10)
    for (std::size_t k = 0; k + 1 < sched.horizon_steps(); ++k) {
      CHECK(sched.angular_rates[k] == doctest::Approx(0.1));
    }
    CHECK(sched.rate_at(1000) == 0.0);
  }
  SUBCASE("straight 200 m") {
    const auto path = dubins::shortest_path({0, 0, 0}, {200, 0, 0}, 100.0);
    const auto sched = dubins::control_schedule(path, 10.0, 1.0);
    REQUIRE(sched.horizon_steps() == 20);
    for (double r : sched.angular_rates) CHECK(std::abs(r) < 1e-12);
  }
  SUBCASE("LSR with segment boundaries inside steps") {
    const auto path = dubins::solve_word({0, 0, 0.3}, {523.0, -217.0, -1.2}, kRadius, Word::LSR);
    REQUIRE(path);
    const double v = 10.0;
    const double dt = 1.0;
    const auto sched = dubins::control_schedule(*path, v, dt);
    for (std::size_t k = 0; k < sched.horizon_steps(); ++k) {
      const double s0 = k * v * dt;
      const double s1 = std::min((k + 1) * v * dt, path->total_length);
      const double expected =
          (dubins::sample_pose(*path, s1).heading - dubins::sample_pose(*path, s0).heading) / dt;
      CHECK(sched.angular_rates[k] == doctest::Approx(expected).epsilon(1e-12));
      CHECK(std::abs(sched.angular_rates[k]) <= v / kRadius + 1e-12);
    }
  }
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(dubins::shortest_path({0, 0, 0}, {1, 1, 0}, 0.0), InputError);
  CHECK_THROWS_AS(dubins::shortest_path({0, 0, 0}, {NAN, 1, 0}, 1.0), InputError);
  const auto path = dubins::shortest_path({0, 0, 0}, {200, 0, 0}, 100.0);
  CHECK_THROWS_AS(dubins::control_schedule(path, 0.0, 1.0), InputError);
}

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

#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "intent_mpc/dynamics.hpp"
#include "intent_mpc/errors.hpp"

using namespace intent_mpc;

namespace {

// Branch digits of scenario j (1-based), most significant first: the
// scenarios enumerate {0,1,2}^{N_r} in lexicographic order.
std::vector<int> digits(std::size_t j, int robust_horizon) {
  std::vector<int> d(robust_horizon);
  std::size_t n = j - 1;
  for (int k = robust_horizon - 1; k >= 0; --k) {
    d[k] = static_cast<int>(n % 3);
    n /= 3;
  }
  return d;
}

}  // namespace

TEST_CASE("Euler step uses the pre-update heading") {
  const Pose a = step({0, 0, 0}, {10, 0}, 1.0);
  CHECK(a == Pose{10, 0, 0});
  const Pose b = step({0, 0, 0}, {10, 0.07}, 1.0);
  CHECK(b == Pose{10, 0, 0.07});
  const Pose c = step({0, 0, kPi / 2}, {8, -0.1}, 1.0);
  CHECK(c.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(c.y == doctest::Approx(8.0));
  CHECK(c.heading == doctest::Approx(kPi / 2 - 0.1));

  // Bitwise against the closed form.
  const Pose s{12.5, -3.25, 0.77};
  const ControlInput in{7.5, -0.043};
  const Pose n = step(s, in, 0.5);
  CHECK(n.x == s.x + 0.5 * in.speed * std::cos(s.heading));
  CHECK(n.y == s.y + 0.5 * in.speed * std::sin(s.heading));
  CHECK(n.heading == s.heading + 0.5 * in.angular_rate);
}

TEST_CASE("rollout") {
  const std::vector<ControlInput> straight(3, ControlInput{10, 0});
  const auto poses = rollout({0, 0, 0}, straight, 1.0);
  REQUIRE(poses.size() == 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(poses[k].x == doctest::Approx(10.0 * k));
    CHECK(poses[k].y == 0.0);
  }

  const std::vector<ControlInput> turning(25, ControlInput{8, 0.01});
  const auto t = rollout({0, 0, 0}, turning, 1.0);
  CHECK(t.back().heading == doctest::Approx(0.25));
}

TEST_CASE("rollout of a Dubins schedule hits sample_pose headings") {
  const auto path = dubins::shortest_path({0, 0, 0.4}, {650, -300, 2.5}, 142.857);
  const double v = 10.0;
  const auto sched = dubins::control_schedule(path, v, 1.0);
  std::vector<ControlInput> inputs;
  for (double r : sched.angular_rates) inputs.push_back({v, r});
  const auto poses = rollout(path.start, inputs, 1.0);
  for (std::size_t k = 0; k < poses.size(); ++k) {
    const double s = std::min(k * v, path.total_length);
    CHECK(std::abs(poses[k].heading - dubins::sample_pose(path, s).heading) < 1e-9);
  }
}

TEST_CASE("branch_index") {
  const TreeShape shape{3, 3, 30};
  for (int k = 0; k < 3; ++k) {
    CHECK(branch_index(1, k, shape) == Branch::Upper);
    CHECK(branch_index(27, k, shape) == Branch::Nominal);
  }
  for (std::size_t j = 1; j <= 27; ++j) CHECK(branch_index(j, 5, shape) == Branch::Nominal);
  CHECK_THROWS_AS(branch_index(0, 0, shape), InputError);
  CHECK_THROWS_AS(branch_index(28, 0, shape), InputError);
  CHECK_THROWS_AS(branch_index(1, 30, shape), InputError);
  CHECK_THROWS_AS(branch_index(1, -1, shape), InputError);
}

TEST_CASE("tree enumerates every branch tuple once") {
  for (int nr = 0; nr <= 3; ++nr) {
    const TreeShape shape{3, nr, 30};
    dubins::ControlSchedule zero{10.0, 1.0, {}};
    const auto tree = build_scenario_tree({0, 0, 0}, zero, 0, kIntruderBounds, shape, 1.0);
    REQUIRE(tree.size() == static_cast<std::size_t>(std::pow(3, nr)));
    std::set<std::vector<int>> seen;
    for (std::size_t j = 1; j <= tree.size(); ++j) {
      std::vector<int> tuple;
      for (int k = 0; k < nr; ++k) tuple.push_back(static_cast<int>(branch_index(j, k, shape)));
      CHECK(tuple == digits(j, nr));
      seen.insert(tuple);
      for (const auto& c : tree.control_sequences[j - 1]) CHECK(c.speed == kIntruderBounds.v_max);
    }
    CHECK(seen.size() == tree.size());
  }
}

TEST_CASE("prefix property at M = 27") {
  const TreeShape shape{3, 3, 30};
  dubins::ControlSchedule nominal{10.0, 1.0, std::vector<double>(40, 0.013)};
  const auto tree = build_scenario_tree({5, 6, 0.2}, nominal, 4, kIntruderBounds, shape, 1.0);
  for (std::size_t a = 1; a <= 27; ++a) {
    for (std::size_t b = 1; b <= 27; ++b) {
      const auto da = digits(a, 3);
      const auto db = digits(b, 3);
      bool same_controls = true;
      for (int k = 0; k < 30; ++k) {
        bool same_prefix = true;
        for (int i = 0; i <= std::min(k, 2); ++i) same_prefix &= da[i] == db[i];
        same_controls &= tree.control_sequences[a - 1][k] == tree.control_sequences[b - 1][k];
        CHECK(same_controls == same_prefix);
        if (same_prefix) CHECK(tree.trajectories[a - 1][k + 1] == tree.trajectories[b - 1][k + 1]);
      }
    }
  }
}

TEST_CASE("tree with zero nominal and +-0.07 extremes") {
  const TreeShape shape{3, 3, 30};
  dubins::ControlSchedule zero{10.0, 1.0, std::vector<double>(30, 0.0)};
  const Pose root{100, 200, 0.5};
  const auto tree = build_scenario_tree(root, zero, 0, kIntruderBounds, shape, 1.0);

  Pose p = root;
  for (int k = 0; k < 30; ++k) {
    CHECK(tree.trajectories[0][k] == p);
    p = step(p, {10.0, k < 3 ? 0.07 : 0.0}, 1.0);
  }
  CHECK(tree.trajectories[0][30] == p);

  Pose q = root;
  for (int k = 0; k < 30; ++k) {
    CHECK(tree.control_sequences[26][k].angular_rate == 0.0);
    q = step(q, {10.0, 0.0}, 1.0);
  }
  CHECK(tree.trajectories[26][30] == q);
}

TEST_CASE("N_r = 0 gives the nominal slice") {
  const TreeShape shape{3, 0, 10};
  std::vector<double> rates;
  for (int i = 0; i < 15; ++i) rates.push_back(0.005 * i);
  dubins::ControlSchedule nominal{10.0, 1.0, rates};
  const auto tree = build_scenario_tree({0, 0, 0}, nominal, 8, kIntruderBounds, shape, 1.0);
  REQUIRE(tree.size() == 1);
  for (int k = 0; k < 10; ++k) {
    CHECK(tree.control_sequences[0][k].angular_rate == nominal.rate_at(8 + k));
  }
}

TEST_CASE("bounds") {
  CHECK_THROWS_AS((ControlBounds{0.0, 9.0, -0.1, 0.1}.validate()), InputError);
  CHECK_THROWS_AS((ControlBounds{10.0, 9.0, -0.1, 0.1}.validate()), InputError);
  const ControlInput c = kOwnshipBounds.clamp({12.0, -0.4});
  CHECK(c == ControlInput{9.0, -0.1});
  CHECK(kOwnshipBounds.contains(c));
  CHECK_FALSE(kOwnshipBounds.contains({5.0, 0.0}));
}

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
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "intent_mpc/pose.hpp"

namespace intent_mpc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitSolver = 3;

struct RunArgs {
  std::filesystem::path scenario;
  std::filesystem::path out_dir;
  std::optional<std::string> mode;  // overrides mpc.mode
  std::optional<std::uint64_t> seed;  // overrides sim.seed
  bool record_timing = false;
};

/// trace.csv, summary.json, traj.svg, distance.svg, controls.svg.
int cmd_simulate(const RunArgs& args, std::ostream& out, std::ostream& err);

/// run_<k>.csv per run, nominal.csv, report.json, and overlay SVGs.
int cmd_montecarlo(const RunArgs& args, std::size_t runs, std::ostream& out, std::ostream& err);

struct DubinsArgs {
  Pose start;
  Pose goal;
  double radius = 0.0;
  double speed = 0.0;
  double dt = 1.0;
};

/// Prints the shortest path and its per-step rate schedule as CSV.
int cmd_dubins(const DubinsArgs& args, std::ostream& out, std::ostream& err);

}  // namespace intent_mpc::cli

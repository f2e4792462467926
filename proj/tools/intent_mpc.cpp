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

// intent_mpc: simulate | montecarlo | dubins

#include <array>
#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "intent_mpc/commands.hpp"
#include "intent_mpc/errors.hpp"

namespace {

using intent_mpc::cli::kExitSchema;

void add_run_options(CLI::App* cmd, intent_mpc::cli::RunArgs& args) {
  cmd->add_option("--scenario", args.scenario, "scenario JSON file")->required();
  cmd->add_option("--out", args.out_dir, "output directory")->required();
  cmd->add_option("--mode", args.mode, "scenario-tree | classic | no-intent | unconstrained");
  cmd->add_option("--seed", args.seed, "override sim.seed");
  cmd->add_flag("--timing", args.record_timing,
                "record solver wall time (makes outputs run-dependent)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intent-aware scenario-tree MPC for two-aircraft conflict resolution"};
  app.require_subcommand(1);

  intent_mpc::cli::RunArgs sim_args;
  CLI::App* simulate = app.add_subcommand("simulate", "run one closed-loop encounter");
  add_run_options(simulate, sim_args);

  intent_mpc::cli::RunArgs mc_args;
  std::size_t runs = 20;
  CLI::App* montecarlo = app.add_subcommand("montecarlo", "run a seeded Monte-Carlo batch");
  add_run_options(montecarlo, mc_args);
  montecarlo->add_option("--runs", runs, "number of disturbed runs")->capture_default_str();

  std::array<double, 3> start{};
  std::array<double, 3> goal{};
  intent_mpc::cli::DubinsArgs dubins_args;
  CLI::App* dubins = app.add_subcommand("dubins", "print a shortest Dubins path and its schedule");
  dubins->add_option("--start", start, "x y heading")->required();
  dubins->add_option("--goal", goal, "x y heading")->required();
  dubins->add_option("--radius", dubins_args.radius, "turn radius [m]")->required();
  dubins->add_option("--speed", dubins_args.speed, "speed [m/s]")->required();
  dubins->add_option("--dt", dubins_args.dt, "step [s]")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitSchema;
  }

  try {
    if (simulate->parsed()) return intent_mpc::cli::cmd_simulate(sim_args, std::cout, std::cerr);
    if (montecarlo->parsed()) {
      return intent_mpc::cli::cmd_montecarlo(mc_args, runs, std::cout, std::cerr);
    }
    dubins_args.start = {start[0], start[1], start[2]};
    dubins_args.goal = {goal[0], goal[1], goal[2]};
    return intent_mpc::cli::cmd_dubins(dubins_args, std::cout, std::cerr);
  } catch (const intent_mpc::NumericalDomainError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return intent_mpc::cli::kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

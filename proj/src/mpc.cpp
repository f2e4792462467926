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

#include "intent_mpc/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "intent_mpc/errors.hpp"

namespace intent_mpc::mpc {
namespace {

// Shared, immutable data behind the closures of one instance.
struct Transcription {
  Pose own_now;
  Pose reference;
  Config config;
  std::size_t horizon = 0;
  std::vector<std::vector<Pose>> intruder;  // scenario trajectories, N + 1 poses each
  double cost_scale = 1.0;                  // solver sees cost / cost_scale
  // c = 1 - d^2 (1 - tol) / rho^2, so any point the solver accepts as
  // feasible (c <= tol) has d >= rho exactly.
  double inv_rho2 = 0.0;

  std::vector<Pose> own_rollout(const nlp::Vector& z) const {
    std::vector<Pose> poses(horizon + 1);
    poses[0] = own_now;
    for (std::size_t k = 0; k < horizon; ++k) {
      const ControlInput in{z[static_cast<Eigen::Index>(horizon + k)],
                            z[static_cast<Eigen::Index>(k)]};
      poses[k + 1] = step(poses[k], in, config.dt);
    }
    return poses;
  }

  static Eigen::Vector3d error(const Pose& p, const Pose& target) {
    return {p.x - target.x, p.y - target.y, wrap_angle(p.heading - target.heading)};
  }

  // Backpropagates per-stage state sensitivities dJ/ds_k through the rollout
  // and adds the resulting dJ/dz into `grad`.
  void backpropagate(const std::vector<Pose>& poses, std::vector<Eigen::Vector3d>& seeds,
                     const nlp::Vector& z, nlp::Vector& grad) const {
    const double dt = config.dt;
    Eigen::Vector3d adjoint = seeds[horizon];
    for (std::size_t k = horizon; k-- > 0;) {
      const auto ku = static_cast<Eigen::Index>(k);
      const auto kv = static_cast<Eigen::Index>(horizon + k);
      const double v = z[kv];
      const double c = std::cos(poses[k].heading);
      const double s = std::sin(poses[k].heading);
      grad[kv] += dt * (adjoint[0] * c + adjoint[1] * s);
      grad[ku] += dt * adjoint[2];
      adjoint[2] += dt * v * (-adjoint[0] * s + adjoint[1] * c);
      adjoint += seeds[k];
    }
  }

  double objective(const nlp::Vector& z, nlp::Vector* grad) const {
    const double value = cost(z, grad);
    if (grad != nullptr) *grad /= cost_scale;
    return value / cost_scale;
  }

  double cost(const nlp::Vector& z, nlp::Vector* grad) const {
    const std::vector<Pose> poses = own_rollout(z);
    const Weights& w = config.weights;
    std::vector<Eigen::Vector3d> seeds(horizon + 1, Eigen::Vector3d::Zero());
    double cost = 0.0;
    for (std::size_t k = 0; k < horizon; ++k) {
      const Eigen::Vector3d e = error(poses[k], reference);
      cost += e.dot(w.Q * e);
      seeds[k] = 2.0 * w.Q * e;
    }
    const Eigen::Vector3d e_final = error(poses[horizon], reference);
    cost += e_final.dot(w.Qf * e_final);
    seeds[horizon] = 2.0 * w.Qf * e_final;
    for (std::size_t k = 1; k < horizon; ++k) {
      const double du = z[static_cast<Eigen::Index>(k)] - z[static_cast<Eigen::Index>(k - 1)];
      cost += w.R * du * du;
    }
    if (grad != nullptr) {
      grad->setZero(z.size());
      // s_0 is fixed, so its seed contributes nothing to dJ/dz.
      seeds[0].setZero();
      backpropagate(poses, seeds, z, *grad);
      for (std::size_t k = 1; k < horizon; ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        const double du = z[i] - z[i - 1];
        (*grad)[i] += 2.0 * w.R * du;
        (*grad)[i - 1] -= 2.0 * w.R * du;
      }
    }
    return cost;
  }

  std::size_t num_constraints() const { return intruder.size() * (horizon + 1); }

  void constraints(const nlp::Vector& z, nlp::Vector& values) const {
    const std::vector<Pose> poses = own_rollout(z);
    Eigen::Index idx = 0;
    for (const auto& scenario : intruder) {
      for (std::size_t k = 0; k <= horizon; ++k) {
        const double dx = poses[k].x - scenario[k].x;
        const double dy = poses[k].y - scenario[k].y;
        values[idx++] = 1.0 - (dx * dx + dy * dy) * inv_rho2;
      }
    }
  }

  void constraint_vjp(const nlp::Vector& z, const nlp::Vector& weights,
                      nlp::Vector& grad) const {
    const std::vector<Pose> poses = own_rollout(z);
    std::vector<Eigen::Vector3d> seeds(horizon + 1, Eigen::Vector3d::Zero());
    Eigen::Index idx = 0;
    for (const auto& scenario : intruder) {
      for (std::size_t k = 0; k <= horizon; ++k) {
        const double w = weights[idx++] * inv_rho2;
        if (w == 0.0) continue;
        seeds[k][0] -= 2.0 * w * (poses[k].x - scenario[k].x);
        seeds[k][1] -= 2.0 * w * (poses[k].y - scenario[k].y);
      }
    }
    seeds[0].setZero();
    backpropagate(poses, seeds, z, grad);
  }
};

// Feasible beats infeasible; then lower objective, or lower violation.
bool better_result(const nlp::Result& a, const nlp::Result& b, double tol) {
  const bool a_ok = a.max_violation <= tol;
  const bool b_ok = b.max_violation <= tol;
  if (a_ok != b_ok) return a_ok;
  if (a_ok) return a.objective_value < b.objective_value;
  return a.max_violation < b.max_violation;
}

bool symmetric(const Eigen::Matrix3d& m) { return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12; }

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::ScenarioTree: return "scenario-tree";
    case Mode::Classic: return "classic";
    case Mode::NoIntent: return "no-intent";
    case Mode::Unconstrained: return "unconstrained";
  }
  return "?";
}

std::optional<Mode> mode_from_string(std::string_view name) {
  for (const Mode m : {Mode::ScenarioTree, Mode::Classic, Mode::NoIntent, Mode::Unconstrained}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

void Weights::validate() const {
  if (!Q.allFinite() || !Qf.allFinite() || !std::isfinite(R)) {
    throw InputError("mpc weights must be finite");
  }
  if (!symmetric(Q) || !symmetric(Qf)) throw InputError("mpc weights Q and Qf must be symmetric");
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> q_eig(Q, Eigen::EigenvaluesOnly);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> qf_eig(Qf, Eigen::EigenvaluesOnly);
  if (q_eig.eigenvalues().minCoeff() < 0.0) throw InputError("mpc weight Q must be PSD");
  if (qf_eig.eigenvalues().minCoeff() <= 0.0) throw InputError("mpc weight Qf must be PD");
  if (!(R > 0.0)) throw InputError("mpc weight R must be positive");
}

void Config::validate() const {
  if (horizon < 1 || robust_horizon < 0 || robust_horizon > horizon) {
    throw InputError("mpc: need N >= 1 and 0 <= N_r <= N");
  }
  if (!(dt > 0.0)) throw InputError("mpc: dt must be positive");
  if (mode != Mode::Unconstrained && !(rho > 0.0)) throw InputError("mpc: rho must be positive");
  if (!is_finite(target)) throw InputError("mpc: target must be finite");
  weights.validate();
  own_bounds.validate();
  intruder_bounds.validate();
  solver.validate();
  if (!(solver.constraint_tol < 1.0)) throw InputError("mpc: solver constraint_tol must be < 1");
}

Pose tracking_reference(const Pose& own_now, const Config& config) {
  const double reach = config.own_bounds.v_min * config.horizon * config.dt;
  const Pose& target = config.target;
  const double dist = horizontal_distance(own_now, target);
  if (!config.pass_through || dist >= reach || dist == 0.0) return target;
  const double scale = reach / dist;
  return {own_now.x + scale * (target.x - own_now.x), own_now.y + scale * (target.y - own_now.y),
          target.heading};
}

ScenarioTree predict_intruder(const Pose& intruder_now, std::size_t t,
                              const dubins::ControlSchedule& intent, const Config& config) {
  TreeShape shape{3, 0, config.horizon};
  switch (config.mode) {
    case Mode::ScenarioTree:
      shape.robust_horizon = config.robust_horizon;
      return build_scenario_tree(intruder_now, intent, t, config.intruder_bounds, shape,
                                 config.dt);
    case Mode::Classic:
      return build_scenario_tree(intruder_now, intent, t, config.intruder_bounds, shape,
                                 config.dt);
    case Mode::NoIntent:
      return build_scenario_tree(intruder_now, dubins::ControlSchedule{}, t,
                                 config.intruder_bounds, shape, config.dt);
    case Mode::Unconstrained: break;
  }
  ScenarioTree empty;
  empty.shape = shape;
  return empty;
}

Instance build_problem(const Pose& own_now, const Pose& intruder_now, std::size_t t,
                       const dubins::ControlSchedule& intent, const Config& config) {
  config.validate();
  if (!is_finite(own_now) || !is_finite(intruder_now)) {
    throw InputError("mpc: current poses must be finite");
  }
  Instance instance;
  instance.tree = predict_intruder(intruder_now, t, intent, config);

  auto data = std::make_shared<Transcription>();
  data->own_now = own_now;
  data->reference = tracking_reference(own_now, config);
  data->config = config;
  data->horizon = static_cast<std::size_t>(config.horizon);
  data->intruder = instance.tree.trajectories;
  const std::vector<ControlInput> cold(data->horizon, ControlInput{config.own_bounds.v_max, 0.0});
  if (config.mode != Mode::Unconstrained) {
    data->inv_rho2 = (1.0 - config.solver.constraint_tol) / (config.rho * config.rho);
  }
  data->cost_scale = std::max(1.0, data->cost(pack(cold), nullptr));
  instance.cost_scale = data->cost_scale;

  const auto n = static_cast<Eigen::Index>(2 * data->horizon);
  nlp::Problem& problem = instance.problem;
  problem.dimension = static_cast<std::size_t>(n);
  problem.lower.resize(n);
  problem.upper.resize(n);
  const auto half = static_cast<Eigen::Index>(data->horizon);
  problem.lower.head(half).setConstant(config.own_bounds.u_min);
  problem.upper.head(half).setConstant(config.own_bounds.u_max);
  problem.lower.tail(half).setConstant(config.own_bounds.v_min);
  problem.upper.tail(half).setConstant(config.own_bounds.v_max);
  problem.num_constraints = data->num_constraints();
  problem.objective = [data](const nlp::Vector& z, nlp::Vector* grad) {
    return data->objective(z, grad);
  };
  problem.constraints = [data](const nlp::Vector& z, nlp::Vector& values) {
    data->constraints(z, values);
  };
  problem.constraint_vjp = [data](const nlp::Vector& z, const nlp::Vector& w, nlp::Vector& g) {
    data->constraint_vjp(z, w, g);
  };
  return instance;
}

nlp::Vector pack(std::span<const ControlInput> inputs) {
  const auto n = static_cast<Eigen::Index>(inputs.size());
  nlp::Vector z(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    z[k] = inputs[static_cast<std::size_t>(k)].angular_rate;
    z[n + k] = inputs[static_cast<std::size_t>(k)].speed;
  }
  return z;
}

std::vector<ControlInput> unpack(const nlp::Vector& z) {
  const Eigen::Index n = z.size() / 2;
  std::vector<ControlInput> inputs(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    inputs[static_cast<std::size_t>(k)] = {z[n + k], z[k]};
  }
  return inputs;
}

Solution solve_step(const Pose& own_now, const Pose& intruder_now, std::size_t t,
                    const dubins::ControlSchedule& intent, const Config& config,
                    const Solution* warm) {
  Instance instance = build_problem(own_now, intruder_now, t, intent, config);
  const auto horizon = static_cast<std::size_t>(config.horizon);

  std::vector<std::vector<ControlInput>> guesses;
  if (warm != nullptr && warm->inputs.size() == horizon && warm->t <= t) {
    const std::size_t shift = t - warm->t;
    std::vector<ControlInput> shifted(horizon);
    for (std::size_t k = 0; k < horizon; ++k) {
      shifted[k] = warm->inputs[std::min(k + shift, horizon - 1)];
    }
    guesses.push_back(std::move(shifted));
  }
  const double v_max = config.own_bounds.v_max;
  guesses.emplace_back(horizon, ControlInput{v_max, 0.0});
  if (config.multi_start) {
    guesses.emplace_back(horizon, ControlInput{v_max, config.own_bounds.u_max});
    guesses.emplace_back(horizon, ControlInput{v_max, config.own_bounds.u_min});
  }

  Solution solution;
  solution.t = t;
  const double tol = config.solver.constraint_tol;
  bool first = true;
  for (const auto& guess : guesses) {
    nlp::Result result = nlp::solve(instance.problem, pack(guess), config.solver);
    if (first || better_result(result, solution.solver, tol)) solution.solver = std::move(result);
    first = false;
  }
  solution.inputs = unpack(solution.solver.z);
  solution.first_input = config.own_bounds.clamp(solution.inputs.front());
  solution.own_predicted = rollout(own_now, solution.inputs, config.dt);
  solution.cost_value = solution.solver.objective_value * instance.cost_scale;
  solution.intruder_scenarios = std::move(instance.tree);
  return solution;
}

}  // namespace intent_mpc::mpc

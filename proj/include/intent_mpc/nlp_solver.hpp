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
 * @file nlp_solver.hpp
 * @brief Smooth inequality-constrained NLP solver over a box.
 *
 *   minimize f(z)  subject to  c_i(z) <= 0,  lo <= z <= hi.
 *
 * Outer loop: Powell-Hestenes-Rockafellar augmented Lagrangian over the
 * inequality multipliers. Inner loop: projected limited-memory BFGS on the
 * box with an Armijo search along the projection arc.
 */

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace intent_mpc::nlp {

using Vector = Eigen::VectorXd;

struct Problem {
  std::size_t dimension = 0;
  Vector lower;
  Vector upper;
  std::size_t num_constraints = 0;

  /// f(z); when `grad` is non-null it receives ∇f(z).
  std::function<double(const Vector& z, Vector* grad)> objective;
  /// values = c(z), sized num_constraints by the caller.
  std::function<void(const Vector& z, Vector& values)> constraints;
  /// grad += Σ_i weights_i ∇c_i(z).
  std::function<void(const Vector& z, const Vector& weights, Vector& grad)> constraint_vjp;

  void validate() const;
};

enum class GradientMode { AnalyticAdjoint, CentralDifference };

struct SolverConfig {
  int outer_max_iters = 50;
  int inner_max_iters = 200;
  double constraint_tol = 1e-4;
  double optimality_tol = 1e-4;  // on the projected gradient of the augmented Lagrangian
  double initial_penalty = 10.0;
  double penalty_growth = 10.0;  // applied when violation fails to shrink by 4x
  GradientMode gradient_mode = GradientMode::AnalyticAdjoint;
  double fd_relative_step = 1e-6;
  int lbfgs_memory = 10;

  void validate() const;
};

enum class Status { Converged, MaxIters, InfeasibleStationary };

std::string_view to_string(Status status);

struct Result {
  Vector z;
  double objective_value = 0.0;
  double max_violation = 0.0;        // max(0, max_i c_i(z))
  double projected_grad_norm = 0.0;  // ∞-norm of P(z - ∇L) - z
  int outer_iters = 0;
  int inner_iters_total = 0;
  Status status = Status::MaxIters;
  Vector multipliers;
  std::vector<double> violation_history;  // max violation after each outer iteration
};

/// Solves from `z0` (projected onto the box). Deterministic; returns the
/// best iterate found even when a limit is hit. Throws NumericalDomainError
/// if any evaluation is non-finite.
Result solve(const Problem& problem, Vector z0, const SolverConfig& config = {});

/// Worst relative discrepancy between analytic and central-difference
/// gradients of the objective and of each constraint at `z`, measured as
/// ‖g_analytic - g_fd‖∞ / max(1, ‖g_analytic‖∞) per function.
double check_gradient(const Problem& problem, const Vector& z, double relative_step = 1e-6);

/// ‖P_box(z - g) - z‖∞.
double projected_gradient_norm(const Vector& z, const Vector& g, const Vector& lower,
                               const Vector& upper);

}  // namespace intent_mpc::nlp

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

#include "intent_mpc/nlp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "intent_mpc/errors.hpp"

namespace intent_mpc::nlp {
namespace {

constexpr double kPenaltyCap = 1e12;
constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

std::vector<double> to_std(const Vector& z) { return {z.data(), z.data() + z.size()}; }

Vector project(const Vector& z, const Vector& lo, const Vector& hi) {
  return z.cwiseMax(lo).cwiseMin(hi);
}

double max_violation(const Vector& c) {
  return c.size() == 0 ? 0.0 : std::max(0.0, c.maxCoeff());
}

// f(z) + 1/(2μ) Σ (max(0, λ + μc)² - λ²) and its gradient.
class AugmentedLagrangian {
 public:
  AugmentedLagrangian(const Problem& problem, const SolverConfig& config)
      : problem_(problem),
        config_(config),
        lambda_(Vector::Zero(static_cast<Eigen::Index>(problem.num_constraints))),
        penalty_(config.initial_penalty),
        c_(static_cast<Eigen::Index>(problem.num_constraints)) {}

  double value(const Vector& z, Vector* grad) {
    if (grad != nullptr && config_.gradient_mode == GradientMode::CentralDifference) {
      const double v = value(z, nullptr);
      finite_difference(z, *grad);
      return v;
    }
    const double f = problem_.objective(z, grad);
    if (!std::isfinite(f) || (grad != nullptr && !grad->allFinite())) {
      throw NumericalDomainError("objective is not finite", to_std(z));
    }
    double augmented = f;
    if (problem_.num_constraints > 0) {
      problem_.constraints(z, c_);
      if (!c_.allFinite()) throw NumericalDomainError("constraint is not finite", to_std(z));
      const Vector shifted = (lambda_ + penalty_ * c_).cwiseMax(0.0);
      augmented += (shifted.squaredNorm() - lambda_.squaredNorm()) / (2.0 * penalty_);
      if (grad != nullptr) {
        problem_.constraint_vjp(z, shifted, *grad);
        if (!grad->allFinite()) {
          throw NumericalDomainError("constraint gradient is not finite", to_std(z));
        }
      }
    }
    return augmented;
  }

  Vector constraint_values(const Vector& z) {
    Vector c(static_cast<Eigen::Index>(problem_.num_constraints));
    if (problem_.num_constraints > 0) {
      problem_.constraints(z, c);
      if (!c.allFinite()) throw NumericalDomainError("constraint is not finite", to_std(z));
    }
    return c;
  }

  Vector& multipliers() { return lambda_; }
  double penalty() const { return penalty_; }
  void set_penalty(double mu) { penalty_ = mu; }

 private:
  void finite_difference(const Vector& z, Vector& grad) {
    grad.resize(z.size());
    Vector probe = z;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double h = config_.fd_relative_step * std::max(1.0, std::abs(z[i]));
      probe[i] = z[i] + h;
      const double up = value(probe, nullptr);
      probe[i] = z[i] - h;
      const double down = value(probe, nullptr);
      probe[i] = z[i];
      grad[i] = (up - down) / (2.0 * h);
    }
  }

  const Problem& problem_;
  const SolverConfig& config_;
  Vector lambda_;
  double penalty_;
  Vector c_;
};

struct InnerOutcome {
  int iterations = 0;
  int accepted_steps = 0;
  double projected_grad_norm = 0.0;
};

struct CurvaturePair {
  Vector s;
  Vector y;
  double rho;
};

// Two-loop recursion restricted to the free variables.
Vector lbfgs_direction(const Vector& g, const Vector& free_mask,
                       const std::deque<CurvaturePair>& memory) {
  Vector q = g.cwiseProduct(free_mask);
  if (memory.empty()) return -q;
  std::vector<double> alpha(memory.size());
  for (std::size_t i = memory.size(); i-- > 0;) {
    const auto& pair = memory[i];
    alpha[i] = pair.rho * pair.s.cwiseProduct(free_mask).dot(q);
    q -= alpha[i] * pair.y.cwiseProduct(free_mask);
  }
  const auto& newest = memory.back();
  q *= newest.s.dot(newest.y) / newest.y.squaredNorm();
  for (std::size_t i = 0; i < memory.size(); ++i) {
    const auto& pair = memory[i];
    const double beta = pair.rho * pair.y.cwiseProduct(free_mask).dot(q);
    q += (alpha[i] - beta) * pair.s.cwiseProduct(free_mask);
  }
  return -q.cwiseProduct(free_mask);
}

InnerOutcome minimize_on_box(AugmentedLagrangian& lagrangian, const Problem& problem,
                             const SolverConfig& config, Vector& z) {
  const Vector& lo = problem.lower;
  const Vector& hi = problem.upper;
  const auto n = z.size();

  InnerOutcome outcome;
  std::deque<CurvaturePair> memory;
  Vector g(n);
  double f = lagrangian.value(z, &g);

  for (; outcome.iterations < config.inner_max_iters; ++outcome.iterations) {
    outcome.projected_grad_norm = projected_gradient_norm(z, g, lo, hi);
    if (outcome.projected_grad_norm <= config.optimality_tol) break;

    Vector free_mask(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool pinned_low = z[i] <= lo[i] && g[i] > 0.0;
      const bool pinned_high = z[i] >= hi[i] && g[i] < 0.0;
      free_mask[i] = (pinned_low || pinned_high) ? 0.0 : 1.0;
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      if (attempt == 1) {
        if (memory.empty()) break;
        memory.clear();
      }
      Vector d = lbfgs_direction(g, free_mask, memory);
      if (d.dot(g) >= 0.0) {
        memory.clear();
        d = -g.cwiseProduct(free_mask);
      }
      double step = 1.0;
      if (memory.empty()) {
        const double dmax = d.cwiseAbs().maxCoeff();
        if (dmax > 1.0) step = 1.0 / dmax;
      }
      for (int k = 0; k < kMaxBacktracks; ++k, step *= 0.5) {
        const Vector trial = project(z + step * d, lo, hi);
        const Vector dz = trial - z;
        const double slope = g.dot(dz);
        if (dz.cwiseAbs().maxCoeff() == 0.0 || slope >= 0.0) break;
        Vector g_trial(n);
        const double f_trial = lagrangian.value(trial, &g_trial);
        if (f_trial <= f + kArmijo * slope) {
          const Vector dg = g_trial - g;
          const double sy = dz.dot(dg);
          if (sy > 1e-12 * dz.norm() * dg.norm()) {
            memory.push_back({dz, dg, 1.0 / sy});
            if (static_cast<int>(memory.size()) > config.lbfgs_memory) memory.pop_front();
          }
          z = trial;
          g = g_trial;
          f = f_trial;
          accepted = true;
          ++outcome.accepted_steps;
          break;
        }
      }
    }
    if (!accepted) {
      outcome.projected_grad_norm = projected_gradient_norm(z, g, lo, hi);
      break;  // no descent left at working precision
    }
  }
  if (outcome.iterations == config.inner_max_iters) {
    outcome.projected_grad_norm = projected_gradient_norm(z, g, lo, hi);
  }
  return outcome;
}

struct Iterate {
  Vector z;
  double objective = 0.0;
  double violation = 0.0;
  double projected_grad_norm = 0.0;
  Vector multipliers;
};

bool better(const Iterate& a, const Iterate& b, double tol) {
  const bool a_ok = a.violation <= tol;
  const bool b_ok = b.violation <= tol;
  if (a_ok != b_ok) return a_ok;
  if (a_ok) return a.objective < b.objective;
  return a.violation < b.violation;
}

}  // namespace

void Problem::validate() const {
  const auto n = static_cast<Eigen::Index>(dimension);
  if (lower.size() != n || upper.size() != n) {
    throw InputError("nlp: bound vectors must match the problem dimension");
  }
  if ((lower.array() > upper.array()).any()) throw InputError("nlp: lower bound exceeds upper");
  if (!objective) throw InputError("nlp: objective is required");
  if (num_constraints > 0 && (!constraints || !constraint_vjp)) {
    throw InputError("nlp: constraints need values and a vector-Jacobian product");
  }
}

void SolverConfig::validate() const {
  if (outer_max_iters < 1 || inner_max_iters < 1 || !(constraint_tol > 0.0) ||
      !(optimality_tol > 0.0) || !(initial_penalty > 0.0) || !(penalty_growth > 1.0) ||
      !(fd_relative_step > 0.0) || lbfgs_memory < 1) {
    throw InputError("nlp: solver tolerances must be positive and growth > 1");
  }
}

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Converged: return "converged";
    case Status::MaxIters: return "max_iters";
    case Status::InfeasibleStationary: return "infeasible_stationary";
  }
  return "?";
}

double projected_gradient_norm(const Vector& z, const Vector& g, const Vector& lower,
                               const Vector& upper) {
  if (z.size() == 0) return 0.0;
  return (project(z - g, lower, upper) - z).cwiseAbs().maxCoeff();
}

Result solve(const Problem& problem, Vector z0, const SolverConfig& config) {
  problem.validate();
  config.validate();
  if (z0.size() != static_cast<Eigen::Index>(problem.dimension)) {
    throw InputError("nlp: initial point has the wrong dimension");
  }

  AugmentedLagrangian lagrangian(problem, config);
  Vector z = project(z0, problem.lower, problem.upper);

  Result result;
  Iterate best;
  bool have_best = false;
  double previous_violation = std::numeric_limits<double>::infinity();
  int stalled = 0;
  bool converged = false;

  for (int outer = 1; outer <= config.outer_max_iters; ++outer) {
    const InnerOutcome inner = minimize_on_box(lagrangian, problem, config, z);
    result.inner_iters_total += inner.iterations;
    result.outer_iters = outer;

    const Vector c = lagrangian.constraint_values(z);
    Vector& lambda = lagrangian.multipliers();
    const Vector updated = (lambda + lagrangian.penalty() * c).cwiseMax(0.0);
    const double multiplier_change =
        c.size() == 0 ? 0.0 : (updated - lambda).cwiseAbs().maxCoeff();
    lambda = updated;

    const double violation = max_violation(c);
    result.violation_history.push_back(violation);
    const double complementarity =
        c.size() == 0 ? 0.0 : lambda.cwiseProduct(c).cwiseAbs().maxCoeff();

    Iterate current{z, problem.objective(z, nullptr), violation, inner.projected_grad_norm,
                    lambda};
    if (!have_best || better(current, best, config.constraint_tol)) {
      best = current;
      have_best = true;
    }

    if (violation <= config.constraint_tol &&
        inner.projected_grad_norm <= config.optimality_tol &&
        complementarity <= 10.0 * config.constraint_tol) {
      best = current;
      converged = true;
      break;
    }

    bool grew = false;
    if (violation > config.constraint_tol && violation > 0.25 * previous_violation) {
      if (lagrangian.penalty() < kPenaltyCap) {
        lagrangian.set_penalty(std::min(kPenaltyCap, lagrangian.penalty() * config.penalty_growth));
        grew = true;
      } else if (violation >= 0.999 * previous_violation) {
        ++stalled;
      }
    }
    if (stalled >= 3) break;
    // Nothing left to change: no inner progress, settled multipliers, fixed penalty.
    if (inner.accepted_steps == 0 && !grew &&
        multiplier_change <= 1e-12 * std::max(1.0, lambda.cwiseAbs().maxCoeff())) {
      break;
    }
    previous_violation = violation;
  }

  result.z = best.z;
  result.objective_value = best.objective;
  result.max_violation = best.violation;
  result.projected_grad_norm = best.projected_grad_norm;
  result.multipliers = best.multipliers;
  if (converged) {
    result.status = Status::Converged;
  } else if (best.violation > config.constraint_tol) {
    result.status = Status::InfeasibleStationary;
  } else {
    result.status = Status::MaxIters;
  }
  return result;
}

double check_gradient(const Problem& problem, const Vector& z, double relative_step) {
  problem.validate();
  const auto n = z.size();
  const auto p = static_cast<Eigen::Index>(problem.num_constraints);
  auto discrepancy = [](const Vector& analytic, const Vector& numeric) {
    return (analytic - numeric).cwiseAbs().maxCoeff() /
           std::max(1.0, analytic.cwiseAbs().maxCoeff());
  };

  Vector analytic(n);
  problem.objective(z, &analytic);
  Vector numeric(n);
  Eigen::MatrixXd jacobian_fd(p, n);
  Vector probe = z;
  Vector c_up(p);
  Vector c_down(p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = relative_step * std::max(1.0, std::abs(z[i]));
    probe[i] = z[i] + h;
    const double up = problem.objective(probe, nullptr);
    if (p > 0) problem.constraints(probe, c_up);
    probe[i] = z[i] - h;
    const double down = problem.objective(probe, nullptr);
    if (p > 0) problem.constraints(probe, c_down);
    probe[i] = z[i];
    numeric[i] = (up - down) / (2.0 * h);
    if (p > 0) jacobian_fd.col(i) = (c_up - c_down) / (2.0 * h);
  }
  double worst = discrepancy(analytic, numeric);

  Vector weights = Vector::Zero(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    weights[j] = 1.0;
    Vector row = Vector::Zero(n);
    problem.constraint_vjp(z, weights, row);
    weights[j] = 0.0;
    worst = std::max(worst, discrepancy(row, jacobian_fd.row(j).transpose()));
  }
  return worst;
}

}  // namespace intent_mpc::nlp

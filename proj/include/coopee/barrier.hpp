// Copyright 2026 The coopee Authors
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

#ifndef COOPEE_BARRIER_HPP
#define COOPEE_BARRIER_HPP

#include <Eigen/Dense>

namespace coopee::barrier {

/// Smooth convex program  min f(z)  s.t.  h_c(z) <= 0 (hard),  g_c(z) <= 0 (soft).
///
/// Hard constraints describe the domain on which f and g are defined; they
/// are never relaxed by phase 1. All functions must be convex and twice
/// differentiable on the interior.
class ConvexProgram {
 public:
  virtual ~ConvexProgram() = default;

  virtual Eigen::Index dimension() const = 0;
  virtual Eigen::Index hard_count() const = 0;
  virtual Eigen::Index soft_count() const = 0;

  virtual double objective(const Eigen::VectorXd& z) const = 0;
  virtual void objective_derivatives(const Eigen::VectorXd& z, Eigen::VectorXd& gradient,
                                     Eigen::MatrixXd& hessian) const = 0;

  virtual void hard_values(const Eigen::VectorXd& z, Eigen::VectorXd& values) const = 0;
  /// Fills the Jacobian (one row per constraint) and sum_c weights_c * Hess h_c.
  virtual void hard_derivatives(const Eigen::VectorXd& z, const Eigen::VectorXd& weights,
                                Eigen::MatrixXd& jacobian, Eigen::MatrixXd& weighted_hessian) const = 0;

  virtual void soft_values(const Eigen::VectorXd& z, Eigen::VectorXd& values) const = 0;
  virtual void soft_derivatives(const Eigen::VectorXd& z, const Eigen::VectorXd& weights,
                                Eigen::MatrixXd& jacobian, Eigen::MatrixXd& weighted_hessian) const = 0;
};

struct Options {
  double gap_tolerance = 1e-6;  // stop when (#constraints)/t falls below this
  double mu = 10.0;             // barrier parameter growth per outer step
  double t0 = 1.0;
  double newton_tolerance = 1e-10;  // on lambda^2 / 2
  int max_newton = 200;             // per centering step
  int max_outer = 60;
};

enum class Status { optimal, max_iterations, numerical_failure };

struct Result {
  Eigen::VectorXd z;
  double objective = 0.0;
  double gap = 0.0;
  double t = 0.0;
  int newton_iterations = 0;
  Status status = Status::optimal;
};

/// Log-barrier path following from a strictly feasible `start`.
Result minimize(const ConvexProgram& program, const Eigen::VectorXd& start, const Options& options);

struct FeasibilityResult {
  bool feasible = false;
  Eigen::VectorXd z;
  /// Smallest achieved uniform relaxation s (negative when strictly feasible).
  double relaxation = 0.0;
  /// Index of the most violated soft constraint at the end (or hard, when `hard_failure`).
  Eigen::Index worst_constraint = -1;
  bool hard_failure = false;
  int newton_iterations = 0;
};

/// Phase 1: minimizes s subject to h(z) <= s, then h(z) <= 0 and g(z) <= s, until a
/// strictly feasible point is centred or infeasibility is certified.
FeasibilityResult find_strictly_feasible(const ConvexProgram& program, const Eigen::VectorXd& start,
                                         const Options& options);

}  // namespace coopee::barrier

#endif  // COOPEE_BARRIER_HPP

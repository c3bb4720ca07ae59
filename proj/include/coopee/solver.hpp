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

#ifndef COOPEE_SOLVER_HPP
#define COOPEE_SOLVER_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coopee/model.hpp"
#include "coopee/scenario.hpp"

namespace coopee {

struct SolverOptions {
  /// Dinkelbach stop tolerance on V(q) in bits; 0 selects 1e-6 * M K a0 T.
  double q_tol = 0.0;
  int max_outer = 50;
  /// Barrier stop tolerance on the duality-gap estimate of the normalized objective.
  double kkt_tol = 1e-6;
  double barrier_mu = 10.0;
  double barrier_t0 = 1.0;
  double newton_tol = 1e-10;
  int max_newton = 200;
  double p_min = kMinPower;
  /// Retries with a 10% tighter threshold when the exact-outage audit fails.
  int max_audit_retries = 3;
  /// Raises the enforced approximate threshold while the exact outage of the
  /// solution stays below pr_out_0.
  bool calibrate_threshold = true;

  /// Throws InvalidInput unless every tolerance is positive.
  void check() const;
  double resolved_q_tol(const ScenarioConfig& config) const;
};

enum class SolveStatus { converged, max_iter, infeasible, solver_failure };

std::string to_string(SolveStatus status);

struct DinkelbachStep {
  double q = 0.0;
  double v = 0.0;  // V(q) = max (E[bits] - q E_tot), approximate outage
  int inner_iterations = 0;
};

/// Which problem family to optimize.
struct ProblemVariant {
  Coding coding = Coding::network_coded;
  bool transfers = true;
  /// Each user spends exactly its period budget (no saving across periods).
  bool depleted = false;
};

struct SolveResult {
  Policy policy;
  double q_star = 0.0;   // EE under the approximate outage (bits/J)
  double ee_exact = 0.0; // EE of `policy` under the exact outage (bits/J)
  std::vector<DinkelbachStep> trace;
  FeasibilityReport feasibility;
  SolveStatus status = SolveStatus::infeasible;
  /// Most violated constraint class when infeasible.
  std::optional<ConstraintClass> binding;
  ProblemVariant variant;
  /// Threshold the final solve enforced (tighter than pr_out_0 after audit retries).
  double enforced_threshold = 0.0;
  int audit_retries = 0;
  std::string message;
};

/// x = (log p_u, log p_r, transfers): user entries at k*M + i, relays at
/// M*K + k*N + j, then E_{i->o,k} for o != i in row-major order per period.
Eigen::VectorXd transform_policy(const ScenarioConfig& config, const Policy& policy,
                                 bool with_transfers = true, double p_min = kMinPower);
Policy inverse_transform(const ScenarioConfig& config, const Eigen::VectorXd& x,
                         bool with_transfers = true);

/// Unnormalized subtractive objective V' = a0 T sum_k lost_k + q E_tot over x,
/// with the approximate outage. `direction` (optional) selects a Hessian action.
struct VPrimeEvaluation {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
  Eigen::VectorXd hessian_vector;
};

VPrimeEvaluation evaluate_v_prime(const ScenarioConfig& config, double q, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& direction = {},
                                  Coding coding = Coding::network_coded, bool with_transfers = true);

struct InnerSolution {
  Eigen::VectorXd x;  // layout of transform_policy (or the depleted layout for depleted variants)
  Policy policy;
  double v_prime = 0.0;  // minimized a0 T sum lost + q E_tot
  double v = 0.0;        // M K a0 T - v_prime
  int newton_iterations = 0;
  bool feasible = false;
  bool converged = false;
  std::optional<ConstraintClass> binding;
};

/// Minimizes V' at fixed q. Without a warm start a phase-1 point is computed first.
InnerSolution inner_solve(const ScenarioConfig& config, double q, const SolverOptions& options = {},
                          const ProblemVariant& variant = {},
                          const Eigen::VectorXd* warm_start = nullptr,
                          double threshold = 0.0);

/// Dinkelbach maximization of the energy efficiency.
SolveResult dinkelbach_optimize(const ScenarioConfig& config, const SolverOptions& options = {},
                                const ProblemVariant& variant = {});

/// Largest incoming/outgoing overlap min(in, out) over users and periods (J).
double transfer_overlap(const ScenarioConfig& config, const Policy& policy);

}  // namespace coopee

#endif  // COOPEE_SOLVER_HPP

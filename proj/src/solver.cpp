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

#include "coopee/solver.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "coopee/outage.hpp"
#include "coopee/posynomial.hpp"
#include "programs.hpp"

namespace coopee {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void SolverOptions::check() const {
  if (!(q_tol >= 0.0)) throw InvalidInput("solver.q_tol must be >= 0");
  if (!(kkt_tol > 0.0)) throw InvalidInput("solver.kkt_tol must be > 0");
  if (!(barrier_mu > 1.0)) throw InvalidInput("solver.barrier_mu must be > 1");
  if (!(barrier_t0 > 0.0)) throw InvalidInput("solver.barrier_t0 must be > 0");
  if (!(newton_tol > 0.0)) throw InvalidInput("solver.newton_tol must be > 0");
  if (max_newton < 1 || max_outer < 1) throw InvalidInput("solver iteration limits must be >= 1");
  if (!(p_min > 0.0)) throw InvalidInput("solver.p_min must be > 0");
}

double SolverOptions::resolved_q_tol(const ScenarioConfig& c) const {
  return q_tol > 0.0 ? q_tol : 1e-6 * c.users * c.periods * c.rate * c.slot;
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::solver_failure: return "solver_failure";
  }
  return "unknown";
}

namespace {

barrier::Options barrier_options(const SolverOptions& o) {
  barrier::Options b;
  b.gap_tolerance = o.kkt_tol;
  b.mu = o.barrier_mu;
  b.t0 = o.barrier_t0;
  b.newton_tolerance = o.newton_tol;
  b.max_newton = o.max_newton;
  return b;
}

/// Owns the outage model and the program built on it.
struct Problem {
  LinkCoefficients coeffs;
  OutageModel model;
  std::unique_ptr<detail::EeProgram> program;

  Problem(const ScenarioConfig& config, const ProblemVariant& variant, double threshold,
          double p_min)
      : coeffs(compute_link_coefficients(config)),
        model(OutageModel::build(config, coeffs, variant.coding)) {
    if (variant.depleted)
      program = std::make_unique<detail::DepletedProgram>(config, model, variant.transfers,
                                                          threshold, p_min);
    else
      program = std::make_unique<detail::MainProgram>(config, model, variant.transfers, threshold,
                                                      p_min);
  }
};

std::optional<ConstraintClass> binding_class(const detail::EeProgram& program,
                                             const barrier::FeasibilityResult& phase1) {
  if (phase1.worst_constraint < 0) return std::nullopt;
  return phase1.hard_failure ? program.hard_class(phase1.worst_constraint)
                             : program.soft_class(phase1.worst_constraint);
}

double bits(const detail::EeProgram& p, const VectorXd& z) { return p.scale() - p.lost_bits(z); }

/// Merges opposing transfers; exact when nothing is lost in transit.
void net_transfers(Policy& policy) {
  for (auto& e : policy.transfers) {
    for (Eigen::Index i = 0; i < e.rows(); ++i)
      for (Eigen::Index o = i + 1; o < e.cols(); ++o) {
        const double common = std::min(e(i, o), e(o, i));
        e(i, o) -= common;
        e(o, i) -= common;
      }
  }
}

void snap_relays(const ScenarioConfig& config, Policy& policy, Coding coding, double p_min) {
  for (int k = 0; k < config.periods; ++k)
    for (int j = 0; j < config.relays; ++j) {
      const double p = policy.p_r(j, k);
      if (!(p < 10.0 * p_min)) continue;
      policy.p_r(j, k) = 0.0;
      if (!validate_policy(config, policy, coding, true).feasible) policy.p_r(j, k) = p;
    }
}

struct Attempt {
  SolveResult result;
  bool audit_failed = false;
};

Attempt solve_once(const ScenarioConfig& config, const SolverOptions& options,
                   const ProblemVariant& variant, double threshold) {
  Attempt attempt;
  SolveResult& result = attempt.result;
  result.variant = variant;
  result.enforced_threshold = threshold;

  Problem problem(config, variant, threshold, options.p_min);
  detail::EeProgram& program = *problem.program;
  const barrier::Options bopts = barrier_options(options);

  const barrier::FeasibilityResult phase1 =
      barrier::find_strictly_feasible(program, program.start_point(), bopts);
  if (!phase1.feasible) {
    result.status = SolveStatus::infeasible;
    result.binding = binding_class(program, phase1);
    result.policy = program.to_policy(phase1.z);
    result.feasibility = validate_policy(config, result.policy, variant.coding, true);
    result.message = "no strictly feasible point";
    return attempt;
  }

  const double q_tol = options.resolved_q_tol(config);
  VectorXd z = phase1.z;
  double q = std::max(0.0, bits(program, z) / program.energy(z));
  result.status = SolveStatus::max_iter;
  for (int outer = 0; outer < options.max_outer; ++outer) {
    program.set_q(q);
    const barrier::Result inner = barrier::minimize(program, z, bopts);
    if (inner.status == barrier::Status::numerical_failure) {
      result.status = SolveStatus::solver_failure;
      result.message = "inner Newton system could not be solved";
      break;
    }
    z = inner.z;
    const double energy = program.energy(z);
    const double v = bits(program, z) - q * energy;
    result.trace.push_back({q, v, inner.newton_iterations});
    if (v <= q_tol) {
      result.status = SolveStatus::converged;
      break;
    }
    const double next = bits(program, z) / energy;
    if (next < q * (1.0 - 1e-12)) throw std::logic_error("Dinkelbach sequence decreased");
    q = next;
  }

  result.q_star = bits(program, z) / program.energy(z);
  result.policy = program.to_policy(z);
  if (variant.transfers && config.eta == 1.0) net_transfers(result.policy);
  snap_relays(config, result.policy, variant.coding, options.p_min);
  result.feasibility = validate_policy(config, result.policy, variant.coding, true);
  const OutageReport exact = outage_report(config, result.policy, OutageMode::exact, variant.coding);
  result.ee_exact = energy_efficiency(config, result.policy, exact, variant.coding);

  if (!result.feasibility.feasible) {
    attempt.audit_failed = !result.feasibility.audit(ConstraintClass::outage).satisfied;
    if (result.status == SolveStatus::converged) result.status = SolveStatus::solver_failure;
    result.binding = ConstraintClass::outage;
    for (const auto& a : result.feasibility.audits)
      if (!a.satisfied) {
        result.binding = a.constraint;
        break;
      }
    result.message = "exact audit failed";
  }
  return attempt;
}

/// The approximate outage overestimates the exact one, so the enforced
/// threshold can be raised until the exact worst period meets the requirement.
void calibrate(const ScenarioConfig& config, const SolverOptions& options,
               const ProblemVariant& variant, SolveResult& best) {
  constexpr int kMaxSolves = 8;
  const double target = config.pr_out_0;
  double accepted = best.enforced_threshold;
  double rejected = HUGE_VAL;
  for (int solve = 0; solve < kMaxSolves; ++solve) {
    const double worst = best.feasibility.outage_exact.maxCoeff();
    if (!(worst > 0.0) || worst >= target * (1.0 - 1e-3)) break;
    double next = accepted * target / worst;
    if (next >= rejected) next = std::sqrt(accepted * rejected);
    if (next <= accepted * (1.0 + 1e-6)) break;
    Attempt trial = solve_once(config, options, variant, next);
    const SolveResult& r = trial.result;
    if (r.status == SolveStatus::converged && r.feasibility.feasible && r.ee_exact >= best.ee_exact) {
      const int retries = best.audit_retries;
      best = std::move(trial.result);
      best.audit_retries = retries;
      accepted = next;
    } else {
      rejected = next;
    }
  }
}

}  // namespace

VectorXd transform_policy(const ScenarioConfig& c, const Policy& policy, bool with_transfers,
                          double p_min) {
  check_dimensions(c, policy);
  const int m = c.users, n = c.relays, kk = c.periods;
  const bool transfers = with_transfers && m > 1;
  VectorXd x((m + n) * kk + (transfers ? m * (m - 1) * kk : 0));
  for (int k = 0; k < kk; ++k) {
    for (int i = 0; i < m; ++i) {
      if (!(policy.p_u(i, k) >= p_min)) throw InvalidInput("user power below p_min");
      x(k * m + i) = std::log(policy.p_u(i, k));
    }
    for (int j = 0; j < n; ++j) {
      if (!(policy.p_r(j, k) >= p_min)) throw InvalidInput("relay power below p_min");
      x(m * kk + k * n + j) = std::log(policy.p_r(j, k));
    }
    if (!transfers) continue;
    Eigen::Index at = (m + n) * kk + static_cast<Eigen::Index>(k) * m * (m - 1);
    for (int i = 0; i < m; ++i)
      for (int o = 0; o < m; ++o)
        if (o != i) x(at++) = policy.transfer(i, o, k);
  }
  return x;
}

Policy inverse_transform(const ScenarioConfig& c, const VectorXd& x, bool with_transfers) {
  const int m = c.users, n = c.relays, kk = c.periods;
  const bool transfers = with_transfers && m > 1;
  const Eigen::Index expected = (m + n) * kk + (transfers ? m * (m - 1) * kk : 0);
  if (x.size() != expected) throw InvalidInput("transformed vector has the wrong length");
  Policy policy = Policy::zeros(c);
  for (int k = 0; k < kk; ++k) {
    for (int i = 0; i < m; ++i) policy.p_u(i, k) = std::exp(x(k * m + i));
    for (int j = 0; j < n; ++j) policy.p_r(j, k) = std::exp(x(m * kk + k * n + j));
    if (!transfers) continue;
    Eigen::Index at = (m + n) * kk + static_cast<Eigen::Index>(k) * m * (m - 1);
    for (int i = 0; i < m; ++i)
      for (int o = 0; o < m; ++o)
        if (o != i) policy.transfers[static_cast<std::size_t>(k)](i, o) = x(at++);
  }
  return policy;
}

VPrimeEvaluation evaluate_v_prime(const ScenarioConfig& config, double q, const VectorXd& x,
                                  const VectorXd& direction, Coding coding, bool with_transfers) {
  if (!(q >= 0.0)) throw InvalidInput("q must be >= 0");
  const LinkCoefficients coeffs = compute_link_coefficients(config);
  const OutageModel model = OutageModel::build(config, coeffs, coding);
  detail::MainProgram program(config, model, with_transfers, config.pr_out_0, kMinPower);
  if (x.size() != program.dimension()) throw InvalidInput("transformed vector has the wrong length");
  program.set_q(q);

  VPrimeEvaluation out;
  out.value = program.lost_bits(x) + q * program.energy(x);
  program.objective_derivatives(x, out.gradient, out.hessian);
  out.gradient *= program.scale();
  out.hessian *= program.scale();
  if (direction.size() == x.size()) out.hessian_vector = out.hessian * direction;
  return out;
}

InnerSolution inner_solve(const ScenarioConfig& config, double q, const SolverOptions& options,
                          const ProblemVariant& variant, const VectorXd* warm_start,
                          double threshold) {
  options.check();
  if (!(q >= 0.0)) throw InvalidInput("q must be >= 0");
  Problem problem(config, variant, threshold > 0.0 ? threshold : config.pr_out_0, options.p_min);
  detail::EeProgram& program = *problem.program;
  const barrier::Options bopts = barrier_options(options);

  InnerSolution out;
  VectorXd start;
  if (warm_start != nullptr) {
    start = *warm_start;
  } else {
    const barrier::FeasibilityResult phase1 =
        barrier::find_strictly_feasible(program, program.start_point(), bopts);
    out.newton_iterations += phase1.newton_iterations;
    if (!phase1.feasible) {
      out.binding = binding_class(program, phase1);
      out.x = phase1.z;
      out.policy = program.to_policy(phase1.z);
      return out;
    }
    start = phase1.z;
  }
  out.feasible = true;
  program.set_q(q);
  const barrier::Result r = barrier::minimize(program, start, bopts);
  out.newton_iterations += r.newton_iterations;
  out.converged = r.status == barrier::Status::optimal;
  out.x = r.z;
  out.policy = program.to_policy(r.z);
  out.v_prime = program.lost_bits(r.z) + q * program.energy(r.z);
  out.v = program.scale() - out.v_prime;
  return out;
}

SolveResult dinkelbach_optimize(const ScenarioConfig& config, const SolverOptions& options,
                                const ProblemVariant& variant) {
  validate(config);
  options.check();
  double threshold = config.pr_out_0;
  Attempt attempt = solve_once(config, options, variant, threshold);
  int retries = 0;
  while (attempt.audit_failed && retries < options.max_audit_retries) {
    ++retries;
    threshold *= 0.9;
    attempt = solve_once(config, options, variant, threshold);
  }
  attempt.result.audit_retries = retries;
  if (options.calibrate_threshold && attempt.result.status == SolveStatus::converged &&
      attempt.result.feasibility.feasible)
    calibrate(config, options, variant, attempt.result);
  return attempt.result;
}

double transfer_overlap(const ScenarioConfig& config, const Policy& policy) {
  double worst = 0.0;
  for (int k = 0; k < config.periods; ++k)
    for (int i = 0; i < config.users; ++i)
      worst = std::max(worst, std::min(policy.sent(i, k), policy.received(i, k)));
  return worst;
}

}  // namespace coopee

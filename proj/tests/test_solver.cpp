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

#include <cmath>
#include <random>

#include "coopee/baselines.hpp"
#include "coopee/outage.hpp"
#include "coopee/solver.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace coopee;
using coopee::testing::rel_diff;
using coopee::testing::scenario_path;
using coopee::testing::tiny_config;

namespace {

Policy random_policy(const ScenarioConfig& c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> logp(std::log(1e-2), std::log(c.p_max)), e(0.0, 1.0);
  Policy p = Policy::zeros(c);
  for (Eigen::Index k = 0; k < c.periods; ++k) {
    for (Eigen::Index i = 0; i < c.users; ++i) p.p_u(i, k) = std::exp(logp(rng));
    for (Eigen::Index j = 0; j < c.relays; ++j) p.p_r(j, k) = std::exp(logp(rng));
    for (Eigen::Index i = 0; i < c.users; ++i)
      for (Eigen::Index t = 0; t < c.users; ++t)
        if (i != t) p.transfers[static_cast<std::size_t>(k)](i, t) = e(rng);
  }
  return p;
}

}  // namespace

TEST_CASE("log transform") {
  ScenarioConfig c = tiny_config(2, 2, 2);
  Policy p = Policy::zeros(c);
  p.p_u.setConstant(1.0);
  p.p_r.setConstant(std::exp(2.0));
  const Eigen::VectorXd x = transform_policy(c, p);
  CHECK(x(0) == 0.0);
  CHECK(x(c.users * c.periods) == doctest::Approx(2.0).epsilon(1e-15));

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Policy q = random_policy(c, rng);
    const Policy back = inverse_transform(c, transform_policy(c, q));
    CHECK((back.p_u - q.p_u).cwiseAbs().maxCoeff() <= 1e-14 * q.p_u.maxCoeff());
    CHECK((back.p_r - q.p_r).cwiseAbs().maxCoeff() <= 1e-14 * q.p_r.maxCoeff());
    for (int k = 0; k < c.periods; ++k)
      CHECK((back.transfers[k] - q.transfers[k]).cwiseAbs().maxCoeff() <= 1e-15);
  }
  const Policy without = inverse_transform(c, transform_policy(c, p, false), false);
  CHECK(without.transfers[0].isZero());
  p.p_u(0, 0) = -1.0;
  CHECK_THROWS_AS(transform_policy(c, p), InvalidInput);
}

TEST_CASE("transformed objective") {
  const ScenarioConfig c = load_scenario(scenario_path("toy_m2n2k2.json"));
  std::mt19937_64 rng(2);

  SUBCASE("q = 0 leaves only the lost bits") {
    const Policy p = random_policy(c, rng);
    const Eigen::VectorXd x = transform_policy(c, p);
    const OutageReport approx = outage_report(c, p, OutageMode::approximate);
    const double expect = c.users * c.rate * c.slot * approx.pr_out.sum();
    CHECK(rel_diff(evaluate_v_prime(c, 0.0, x).value, expect) < 1e-12);
  }
  SUBCASE("gradient and Hessian against finite differences") {
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::VectorXd x = transform_policy(c, random_policy(c, rng));
      const double q = 1e4 * (1 + trial);
      const VPrimeEvaluation v = evaluate_v_prime(c, q, x);
      for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double h = 1e-6 * std::max(1.0, std::abs(x(k)));
        Eigen::VectorXd xp = x, xm = x;
        xp(k) += h;
        xm(k) -= h;
        const double fd = (evaluate_v_prime(c, q, xp).value - evaluate_v_prime(c, q, xm).value) / (2 * h);
        CHECK(std::abs(fd - v.gradient(k)) <= 1e-6 * std::max(std::abs(v.gradient(k)), 1e-6 * std::abs(v.value)));
        const Eigen::VectorXd hd =
            (evaluate_v_prime(c, q, xp).gradient - evaluate_v_prime(c, q, xm).gradient) / (2 * h);
        CHECK((hd - v.hessian.col(k)).norm() <= 1e-5 * std::max(v.hessian.col(k).norm(), 1e-6 * std::abs(v.value)));
      }
    }
  }
  SUBCASE("Hessian is positive semidefinite") {
    std::normal_distribution<double> n(0.0, 1.0);
    for (int point = 0; point < 5; ++point) {
      const Eigen::VectorXd x = transform_policy(c, random_policy(c, rng));
      const VPrimeEvaluation v = evaluate_v_prime(c, 3e4, x);
      for (int d = 0; d < 50; ++d) {
        Eigen::VectorXd dir(x.size());
        for (Eigen::Index k = 0; k < dir.size(); ++k) dir(k) = n(rng);
        CHECK(dir.dot(v.hessian * dir) >= -1e-9);
      }
    }
  }
}

TEST_CASE("Dinkelbach on the toy scenario") {
  const ScenarioConfig c = load_scenario(scenario_path("toy_m2n2k2.json"));
  SolverOptions o;
  const SolveResult r = dinkelbach_optimize(c, o);
  REQUIRE(r.status == SolveStatus::converged);
  CHECK(r.feasibility.feasible);
  REQUIRE(r.trace.size() >= 2);
  for (std::size_t s = 1; s < r.trace.size(); ++s) CHECK(r.trace[s].q >= r.trace[s - 1].q);
  CHECK(std::abs(r.trace.back().v) <= o.resolved_q_tol(c));
  // q* is the ratio at the final iterate, one update past the last trace entry.
  CHECK(r.q_star >= r.trace.back().q);
  CHECK((r.q_star - r.trace.back().q) * total_energy(c, r.policy) <= o.resolved_q_tol(c) * (1 + 1e-9));
  CHECK(transfer_overlap(c, r.policy) <= 1e-6);

  SUBCASE("within 1% of the grid oracle") {
    const SolveResult grid = brute_force_optimize(c);
    REQUIRE(grid.status == SolveStatus::converged);
    CHECK(rel_diff(r.q_star, grid.q_star) <= 0.01);
  }
  SUBCASE("warm start needs at most twice the cold Newton work") {
    // Warm start from the solution at an earlier q; cold start solves from scratch.
    const double q = r.trace.back().q;
    const InnerSolution first = inner_solve(c, r.trace.front().q, o);
    REQUIRE(first.feasible);
    const InnerSolution warm = inner_solve(c, q, o, {}, &first.x);
    const InnerSolution cold = inner_solve(c, q, o);
    REQUIRE(warm.converged);
    REQUIRE(cold.converged);
    CHECK(warm.newton_iterations <= 2 * cold.newton_iterations);
    CHECK(rel_diff(warm.v_prime, cold.v_prime) < 1e-6);
  }
}

TEST_CASE("one user, one relay, one period matches the grid oracle") {
  ScenarioConfig c = tiny_config(1, 1, 1);
  c.arrivals(0, 0) = 3.0;
  c.pr_out_0 = 5e-3;
  const SolveResult r = dinkelbach_optimize(c);
  const SolveResult grid = brute_force_optimize(c);
  REQUIRE(r.status == SolveStatus::converged);
  REQUIRE(grid.status == SolveStatus::converged);
  CHECK(rel_diff(r.q_star, grid.q_star) <= 0.01);
  CHECK(r.q_star >= grid.q_star * (1.0 - 1e-6));
}

TEST_CASE("identical users receive identical powers") {
  ScenarioConfig c = tiny_config(2, 2, 2);
  c.eta = 1.0;
  c.arrivals.setConstant(1.0);
  const SolveResult r = dinkelbach_optimize(c);
  REQUIRE(r.status == SolveStatus::converged);
  for (int k = 0; k < c.periods; ++k) CHECK(rel_diff(r.policy.p_u(0, k), r.policy.p_u(1, k)) <= 1e-6);
}

TEST_CASE("vacuous threshold trades outage for energy") {
  ScenarioConfig c = tiny_config(2, 2, 2);
  c.arrivals.setConstant(50.0);
  c.pr_out_0 = 1e-4;
  const SolveResult tight = dinkelbach_optimize(c);
  c.pr_out_0 = 0.9;
  const SolveResult loose = dinkelbach_optimize(c);
  REQUIRE(tight.status == SolveStatus::converged);
  REQUIRE(loose.status == SolveStatus::converged);
  CHECK(loose.policy.p_u.sum() < tight.policy.p_u.sum());
  CHECK(loose.policy.p_r.sum() < tight.policy.p_r.sum());
  CHECK(loose.q_star >= tight.q_star);
}

TEST_CASE("impossible threshold is reported as infeasible") {
  ScenarioConfig c = load_scenario(scenario_path("toy_m2n2k2.json"));
  c.pr_out_0 = 1e-12;
  const SolveResult r = dinkelbach_optimize(c);
  CHECK(r.status == SolveStatus::infeasible);
  CHECK(r.binding.has_value());
  CHECK_FALSE(r.message.empty());
  const SolveResult grid = brute_force_optimize(c);
  CHECK(grid.status == SolveStatus::infeasible);
}

TEST_CASE("solver options are validated") {
  SolverOptions o;
  o.barrier_mu = 1.0;
  CHECK_THROWS_AS(o.check(), InvalidInput);
  o = {};
  o.max_outer = 0;
  CHECK_THROWS_AS(o.check(), InvalidInput);
  CHECK_THROWS_AS(inner_solve(tiny_config(1, 1, 1), -1.0), InvalidInput);
}

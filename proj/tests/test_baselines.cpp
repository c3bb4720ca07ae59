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
using coopee::testing::random_config;
using coopee::testing::rel_diff;
using coopee::testing::scenario_path;
using coopee::testing::tiny_config;

namespace {

constexpr double kDominanceSlack = 1e-6;  // relative, same order as the Dinkelbach stop rule

}  // namespace

TEST_CASE("baseline names round trip") {
  for (auto k : {BaselineKind::depleted_energy, BaselineKind::no_transfer, BaselineKind::uniform_power,
                 BaselineKind::nonc_df})
    CHECK(baseline_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(baseline_from_string("greedy"), InvalidInput);
}

TEST_CASE("depleted energy") {
  SUBCASE("arrivals equal to an optimal consumption reproduce its EE") {
    ScenarioConfig c = load_scenario(scenario_path("toy_m2n2k2.json"));
    c.arrivals.setConstant(40.0);
    const SolveResult free = no_transfer_policy(c);
    REQUIRE(free.status == SolveStatus::converged);
    c.arrivals = free.policy.p_u * c.slot;
    const SolveResult depleted = depleted_energy_policy(c, {}, false);
    REQUIRE(depleted.status == SolveStatus::converged);
    CHECK(rel_diff(depleted.q_star, free.q_star) <= kDominanceSlack);
  }
  SUBCASE("never beats the optimized policy") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 4; ++trial) {
      const ScenarioConfig c = random_config(rng, 2, 2, 2);
      const SolveResult opt = dinkelbach_optimize(c);
      const SolveResult dep = depleted_energy_policy(c);
      const SolveResult dep_only = depleted_energy_policy(c, {}, false);
      if (opt.status != SolveStatus::converged) {
        CHECK(dep.status != SolveStatus::converged);
        CHECK(dep_only.status != SolveStatus::converged);
        continue;
      }
      if (dep.status == SolveStatus::converged) CHECK(dep.q_star <= opt.q_star * (1 + kDominanceSlack));
      if (dep_only.status == SolveStatus::converged) CHECK(dep_only.q_star <= opt.q_star * (1 + kDominanceSlack));
    }
  }
  SUBCASE("an empty period without a partner cannot be served") {
    ScenarioConfig c = tiny_config(1, 1, 2);
    c.arrivals << 0.0, 2.0;
    const SolveResult r = depleted_energy_policy(c);
    CHECK(r.status == SolveStatus::infeasible);
    CHECK(r.binding.has_value());
  }
}

TEST_CASE("no energy transfer") {
  ScenarioConfig c = load_scenario(scenario_path("toy_m2n2k2.json"));
  c.eta = 0.2;
  const SolveResult low = no_transfer_policy(c);
  c.eta = 1.0;
  const SolveResult high = no_transfer_policy(c);
  REQUIRE(low.status == SolveStatus::converged);
  CHECK(low.q_star == high.q_star);
  CHECK(low.policy.p_u == high.policy.p_u);
  for (const auto& e : low.policy.transfers) CHECK(e.isZero());

  c.eta = 0.6;
  const SolveResult opt = dinkelbach_optimize(c);
  CHECK(low.q_star <= opt.q_star * (1 + kDominanceSlack));

  SUBCASE("one starving user needs its partner") {
    ScenarioConfig s = c;
    s.arrivals.row(0).setConstant(1e-4);
    s.arrivals.row(1).setConstant(10.0);
    s.pr_out_0 = 1e-3;
    CHECK(no_transfer_policy(s).status == SolveStatus::infeasible);
    CHECK(dinkelbach_optimize(s).status == SolveStatus::converged);
  }
}

TEST_CASE("uniform power") {
  SUBCASE("equal arrivals give the depleted powers") {
    ScenarioConfig c = tiny_config(2, 2, 3);
    c.arrivals.setConstant(1.5);
    const SolveResult ref = dinkelbach_optimize(c);
    REQUIRE(ref.status == SolveStatus::converged);
    const PolicyEvaluation u = uniform_power_policy(c, ref);
    REQUIRE(u.feasible);
    CHECK_FALSE(u.power_reduced);
    CHECK((u.policy.p_u.array() == 1.5).all());
    for (const auto& e : u.policy.transfers) CHECK(e.isZero());
    CHECK(u.policy.p_r == ref.policy.p_r);
  }
  SUBCASE("power is capped at p_max and the surplus is left unspent") {
    ScenarioConfig c = tiny_config(2, 2, 2);
    c.arrivals.setConstant(3.0 * c.p_max);
    const SolveResult ref = dinkelbach_optimize(c);
    REQUIRE(ref.status == SolveStatus::converged);
    const PolicyEvaluation u = uniform_power_policy(c, ref);
    CHECK(u.uniform_power == c.p_max);
    CHECK((u.policy.p_u.array() == c.p_max).all());
    const EnergyLedger l = energy_ledger(c, u.policy);
    CHECK(l.available(0, 1) - c.p_max * c.slot > 0.0);
  }
  SUBCASE("transfers make a lopsided schedule causal") {
    ScenarioConfig c = tiny_config(2, 2, 2);
    c.eta = 1.0;
    c.arrivals << 0.0, 1.0, 3.0, 0.0;
    const SolveResult ref = dinkelbach_optimize(c);
    REQUIRE(ref.status == SolveStatus::converged);
    const PolicyEvaluation u = uniform_power_policy(c, ref);
    REQUIRE(u.feasible);
    CHECK(u.uniform_power == doctest::Approx(1.0));
    CHECK(u.policy.transfers[0](1, 0) > 0.0);
    CHECK(u.feasibility.feasible);
  }
  SUBCASE("lossy transfers lower the constant power") {
    ScenarioConfig c = tiny_config(2, 2, 2);
    c.eta = 0.5;
    c.arrivals << 0.0, 1.0, 3.0, 0.0;
    const SolveResult ref = dinkelbach_optimize(c);
    REQUIRE(ref.status == SolveStatus::converged);
    const PolicyEvaluation u = uniform_power_policy(c, ref);
    CHECK(u.power_reduced);
    CHECK(u.uniform_power < 1.0);
    CHECK(u.feasibility.feasible);
  }
}

TEST_CASE("schedule_transfers moves surplus to deficits") {
  ScenarioConfig c = tiny_config(2, 2, 3);
  c.eta = 0.8;
  c.arrivals << 0.0, 0.0, 3.0, 6.0, 0.0, 0.0;
  Policy p = Policy::zeros(c);
  p.p_u.setConstant(1.0);
  p.p_r.setConstant(1.0);
  REQUIRE(schedule_transfers(c, p));
  CHECK(validate_policy(c, p, Coding::network_coded, false).feasible);
  double sent = 0.0;
  for (const auto& e : p.transfers) sent += e(1, 0);
  CHECK(sent == doctest::Approx(2.0 / 0.8).epsilon(1e-12));  // two 1 J deficits of user 0
  p.p_u.setConstant(2.0);
  CHECK_FALSE(schedule_transfers(c, p));
}

TEST_CASE("decode and forward without network coding") {
  ScenarioConfig c = tiny_config(1, 1, 1);
  c.pr_out_0 = 0.05;
  const SolveResult r = nonc_df_policy(c);
  REQUIRE(r.status == SolveStatus::converged);
  CHECK(r.variant.coding == Coding::nonc_df);
  const LinkOutages links = link_outages_exact(c, r.policy.p_u.col(0), r.policy.p_r.col(0));
  const double series = 1.0 - (1.0 - links.users(0, 0)) * (1.0 - links.relays(0));
  CHECK(rel_diff(outage_report(c, r.policy, OutageMode::exact, Coding::nonc_df).pr_out(0), series) < 1e-14);
}

TEST_CASE("grid oracle") {
  ScenarioConfig c = tiny_config(1, 1, 1);
  c.arrivals(0, 0) = 3.0;
  c.pr_out_0 = 5e-3;
  SUBCASE("refining the grid moves the optimum by less than its resolution") {
    GridSpec coarse;
    GridSpec fine;
    fine.points = 2 * coarse.points;
    const SolveResult a = brute_force_optimize(c, coarse);
    const SolveResult b = brute_force_optimize(c, fine);
    REQUIRE(a.status == SolveStatus::converged);
    REQUIRE(b.status == SolveStatus::converged);
    // Final log-power spacing of the coarse search after its zoom passes.
    double h = std::log(c.p_max / coarse.p_min) / (coarse.points - 1);
    for (int r = 0; r < coarse.refinements; ++r) h *= 2.0 * coarse.zoom_cells / (coarse.points - 1);
    // EE changes by at most a factor e^h when every power moves by one cell.
    CHECK(std::abs(std::log(a.q_star / b.q_star)) <= h);
    CHECK(a.feasibility.feasible);
  }
  SUBCASE("oversized instances are refused") {
    CHECK_THROWS_AS(brute_force_optimize(tiny_config(3, 3, 1)), InvalidInput);
    CHECK_THROWS_AS(brute_force_optimize(tiny_config(2, 2, 3)), InvalidInput);
  }
}

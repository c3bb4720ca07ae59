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

#include "coopee/montecarlo.hpp"
#include "coopee/outage.hpp"
#include "coopee/special.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace coopee;
using coopee::testing::tiny_config;

namespace {

// Powers that put the bundled toy links at a desk-scale outage (a few percent).
Policy moderate_policy(const ScenarioConfig& c, double p_user, double p_relay) {
  Policy p = Policy::zeros(c);
  p.p_u.setConstant(p_user);
  p.p_r.setConstant(p_relay);
  return p;
}

}  // namespace

TEST_CASE("counter RNG") {
  CounterRng a({42, 7}), b({42, 7}), other({42, 8});
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t x = a.next_u64();
    CHECK(x == b.next_u64());
    differs |= x != other.next_u64();
    const double u = a.uniform();
    b.uniform();
    other.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
  CHECK(differs);
}

TEST_CASE("channel gain sampler") {
  constexpr int n = 1'000'000;
  for (double m : {1.0, 0.5, 2.5}) {
    CAPTURE(m);
    const double omega = 1.7;
    CounterRng rng({2024, static_cast<std::uint64_t>(m * 10)});
    double sum = 0.0, sum2 = 0.0;
    const double b = 0.3;
    int below = 0;
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i) {
      const double g = sample_channel_power_gain(omega, m, rng);
      draws[i] = g;
      sum += g;
      below += g < b * omega / m;
    }
    const double mean = sum / n;
    for (double g : draws) sum2 += (g - mean) * (g - mean);
    const double var = sum2 / (n - 1);
    const double theta = omega / m;
    CHECK(std::abs(mean - omega) <= 3.0 * std::sqrt(omega * omega / m / n));
    const double var_sd = std::sqrt((2 * m * m + 6 * m) * std::pow(theta, 4) / n);
    CHECK(std::abs(var - omega * omega / m) <= 3.0 * var_sd);
    const double p = regularized_lower_gamma(m, b);
    CHECK(std::abs(below / double(n) - p) <= 3.0 * std::sqrt(p * (1 - p) / n));
  }
}

TEST_CASE("single-period simulation") {
  const ScenarioConfig c = tiny_config(2, 3, 1);
  CounterRng rng({5, 0});
  SUBCASE("huge powers always succeed") {
    for (int i = 0; i < 1000; ++i) CHECK(simulate_period(c, Eigen::Vector2d::Constant(1e12), Eigen::Vector3d::Constant(1e12), rng).success);
  }
  SUBCASE("dead channels always fail") {
    ScenarioConfig dead = c;
    dead.d_h.setConstant(1e9);
    dead.d_g.setConstant(1e9);
    const Eigen::Vector2d pu = Eigen::Vector2d::Constant(kMinPower);
    const Eigen::Vector3d pr = Eigen::Vector3d::Constant(kMinPower);
    for (int i = 0; i < 1000; ++i) CHECK_FALSE(simulate_period(dead, pu, pr, rng).success);
  }
  SUBCASE("relay decode frequency matches the analytic probability") {
    const Eigen::Vector2d pu(0.02, 0.03);
    const Eigen::Vector3d pr(0.05, 0.05, 0.05);
    const LinkOutages links = link_outages_exact(c, pu, pr);
    const PeriodThresholds t = PeriodThresholds::build(c, pu, pr);
    constexpr int n = 1'000'000;
    std::vector<int> decoded(3, 0);
    for (int i = 0; i < n; ++i) {
      const TrialOutcome o = simulate_period(c, t, rng);
      for (int j = 0; j < 3; ++j) decoded[j] += (o.decoded_set >> j) & 1u;
    }
    for (int j = 0; j < 3; ++j) {
      std::vector<double> pe(2);
      for (int i = 0; i < 2; ++i) pe[i] = links.users(i, j);
      const double rho = relay_decode_prob(pe);
      CAPTURE(j);
      CHECK(std::abs(decoded[j] / double(n) - rho) <= 3.0 * std::sqrt(rho * (1 - rho) / n));
    }
  }
}

TEST_CASE("outage estimates") {
  const ScenarioConfig c = load_scenario(coopee::testing::scenario_path("toy_m2n2k2.json"));
  const Policy p = moderate_policy(c, 0.05, 0.08);
  MonteCarloOptions o;
  o.trials = 20'000;
  o.threads = 1;

  SUBCASE("Wilson intervals cover the analytic outage") {
    int covered = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      o.seed = seed;
      const MonteCarloReport r = estimate_outage(c, p, o);
      for (const auto& e : r.periods) {
        covered += e.ci_low <= e.exact && e.exact <= e.ci_high;
        ++total;
      }
    }
    const double exact = outage_report(c, p, OutageMode::exact).pr_out(0);
    CHECK(exact > 1e-3);
    CHECK(exact < 1e-1);
    CHECK(covered >= 0.93 * total);
  }
  SUBCASE("deterministic replay and thread-count invariance") {
    o.seed = 99;
    const MonteCarloReport a = estimate_outage(c, p, o);
    const MonteCarloReport b = estimate_outage(c, p, o);
    o.threads = 3;
    o.chunk = 4096;
    const MonteCarloReport d = estimate_outage(c, p, o);
    o.threads = 1;
    const MonteCarloReport e = estimate_outage(c, p, o);
    for (int k = 0; k < c.periods; ++k) {
      CHECK(a.periods[k].failures == b.periods[k].failures);
      CHECK(d.periods[k].failures == e.periods[k].failures);
    }
    CHECK(a.empirical_ee == b.empirical_ee);
    o.seed = 100;
    CHECK(estimate_outage(c, p, o).periods[0].failures != e.periods[0].failures);
  }
  SUBCASE("zero trials is rejected") {
    o.trials = 0;
    CHECK_THROWS_AS(estimate_outage(c, p, o), InvalidInput);
  }
}

TEST_CASE("Wilson interval") {
  const auto [lo, hi] = wilson_interval(50, 1000);
  CHECK(lo < 0.05);
  CHECK(hi > 0.05);
  // Reference: p = 0.05, n = 1000, z = 1.96.
  CHECK(lo == doctest::Approx(0.0381302624).epsilon(1e-8));
  CHECK(hi == doctest::Approx(0.0653138202).epsilon(1e-8));
  const auto [zlo, zhi] = wilson_interval(0, 100);
  CHECK(zlo == 0.0);
  CHECK(zhi > 0.0);
}

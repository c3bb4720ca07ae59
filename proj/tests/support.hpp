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

#ifndef COOPEE_TESTS_SUPPORT_HPP
#define COOPEE_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>
#include <string>

#include "coopee/model.hpp"
#include "coopee/scenario.hpp"

namespace coopee::testing {

inline std::string scenario_path(const std::string& name) {
  return std::string(COOPEE_SCENARIO_DIR) + "/" + name;
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Small scenario with unit-ish link budgets; callers overwrite what they need.
inline ScenarioConfig tiny_config(int users, int relays, int periods) {
  ScenarioConfig c;
  c.users = users;
  c.relays = relays;
  c.periods = periods;
  c.bandwidth = 1.25e5;
  c.rate = 1e5;
  c.slot = 1.0;
  c.p_max = 20.0;
  c.eta = 0.6;
  c.fading_m = 1.0;
  c.omega_h = Eigen::MatrixXd::Constant(users, relays, 2.0);
  c.d_h = Eigen::MatrixXd::Constant(users, relays, 900.0);
  c.beta_h = Eigen::MatrixXd::Constant(users, relays, 2.5);
  c.n0_h = Eigen::MatrixXd::Constant(users, relays, 1e-16);
  c.omega_g = Eigen::VectorXd::Constant(relays, 2.0);
  c.d_g = Eigen::VectorXd::Constant(relays, 700.0);
  c.beta_g = Eigen::VectorXd::Constant(relays, 2.5);
  c.n0_g = Eigen::VectorXd::Constant(relays, 1e-16);
  c.arrivals = Eigen::MatrixXd::Constant(users, periods, 2.0);
  c.initial_energy = Eigen::VectorXd::Zero(users);
  c.pr_out_0 = 1e-3;
  return c;
}

/// Randomized geometry and arrivals around tiny_config.
inline ScenarioConfig random_config(std::mt19937_64& rng, int users, int relays, int periods) {
  ScenarioConfig c = tiny_config(users, relays, periods);
  std::uniform_real_distribution<double> omega(0.8, 3.0), dist(500.0, 1300.0), beta(2.3, 2.7),
      n0(0.5e-16, 2e-16), arrival(0.2, 4.0);
  for (int i = 0; i < users; ++i)
    for (int j = 0; j < relays; ++j) {
      c.omega_h(i, j) = omega(rng);
      c.d_h(i, j) = dist(rng);
      c.beta_h(i, j) = beta(rng);
      c.n0_h(i, j) = n0(rng);
    }
  for (int j = 0; j < relays; ++j) {
    c.omega_g(j) = omega(rng);
    c.d_g(j) = dist(rng);
    c.beta_g(j) = beta(rng);
    c.n0_g(j) = n0(rng);
  }
  for (int i = 0; i < users; ++i)
    for (int k = 0; k < periods; ++k) c.arrivals(i, k) = arrival(rng);
  return c;
}

}  // namespace coopee::testing

#endif  // COOPEE_TESTS_SUPPORT_HPP

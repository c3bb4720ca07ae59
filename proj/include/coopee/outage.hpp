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

#ifndef COOPEE_OUTAGE_HPP
#define COOPEE_OUTAGE_HPP

#include <span>

#include <Eigen/Dense>

#include "coopee/model.hpp"
#include "coopee/scenario.hpp"

namespace coopee {

/// Parameters of one Nakagami-m link.
struct LinkParameters {
  double m = 1.0;
  double rate = 1.0;       // alpha0, bits/s
  double bandwidth = 1.0;  // B, Hz
  double n0 = 1.0;         // W/Hz
  double distance = 1.0;   // m
  double exponent = 2.0;   // path-loss exponent
  double omega = 1.0;      // average fading gain

  static LinkParameters first_hop(const ScenarioConfig& config, int user, int relay);
  static LinkParameters second_hop(const ScenarioConfig& config, int relay);
};

/// b = m (2^(a0/B) - 1) N0 B / (d^-beta Omega p); the outage is P(m, b).
double outage_argument(double power, const LinkParameters& link);

/// Exact link outage P(m, b) (regularized LOWER incomplete gamma). Throws
/// std::invalid_argument for power <= 0.
double per_link_outage_exact(double power, const LinkParameters& link);

/// Small-argument approximation c p^-m. Not clamped: may exceed 1.
double per_link_outage_approx(double power, double coefficient, double m);

/// rho = prod_i (1 - Pr_e,i): probability a relay decodes every user message.
double relay_decode_prob(std::span<const double> per_link_outages);

struct OutageBreakdown {
  double pr_out = 0.0;
  double pr_A = 0.0;  // fewer than M relays decode
  double pr_B = 0.0;  // enough relays decode but fewer than M forward
};

/// Exact network outage from per-relay decode probabilities rho_j and
/// second-hop outages. Throws std::invalid_argument when N < M or N > 20.
OutageBreakdown network_outage_exact(std::span<const double> rho, std::span<const double> pe_relay,
                                     int users);

/// Same, with 1 - rho_j supplied separately to avoid cancellation.
OutageBreakdown network_outage_exact(std::span<const double> rho,
                                     std::span<const double> rho_complement,
                                     std::span<const double> pe_relay, int users);

/// Posynomial approximation of the network outage for one period's powers.
/// Throws std::invalid_argument for non-positive powers.
OutageBreakdown network_outage_approx(const Eigen::VectorXd& p_u, const Eigen::VectorXd& p_r,
                                      const LinkCoefficients& coeffs, double m, int users);

/// Exact per-link outages for one period. A relay power of 0 means the relay
/// is silent: its second-hop outage is 1.
struct LinkOutages {
  Eigen::MatrixXd users;   // M x N
  Eigen::VectorXd relays;  // N
};

LinkOutages link_outages_exact(const ScenarioConfig& config, const Eigen::VectorXd& p_u,
                               const Eigen::VectorXd& p_r);

/// Exact NC outage of one period computed from link outages.
OutageBreakdown network_outage_from_links(const LinkOutages& links, int users);

/// Per-user outage without network coding: user i is lost when no relay both
/// decodes its message and forwards it.
Eigen::VectorXd nonc_user_outage_exact(const LinkOutages& links);
Eigen::VectorXd nonc_user_outage_approx(const Eigen::VectorXd& p_u, const Eigen::VectorXd& p_r,
                                        const LinkCoefficients& coeffs, double m);

/// One period's outage under `coding`. For NoNC the breakdown averages users
/// (pr_A = no relay decodes the message); `worst` receives the largest user outage.
OutageBreakdown period_outage(const ScenarioConfig& config, const LinkCoefficients& coeffs,
                              const Eigen::VectorXd& p_u, const Eigen::VectorXd& p_r,
                              OutageMode mode, Coding coding, double* worst = nullptr);

OutageReport outage_report(const ScenarioConfig& config, const Policy& policy, OutageMode mode,
                           Coding coding = Coding::network_coded);

}  // namespace coopee

#endif  // COOPEE_OUTAGE_HPP

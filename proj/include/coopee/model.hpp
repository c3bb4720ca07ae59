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

#ifndef COOPEE_MODEL_HPP
#define COOPEE_MODEL_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coopee/scenario.hpp"

namespace coopee {

/// Absolute tolerance for energy (J) and power (W) feasibility checks.
inline constexpr double kFeasibilityTolerance = 1e-9;
/// Smallest admissible user transmit power; stands in for the strict p > 0.
inline constexpr double kMinPower = 1e-9;
/// Relative slack granted to the exact-outage threshold check.
inline constexpr double kOutageSlack = 1e-6;

/// Relay-side protocol. `network_coded` forwards one MDNC codeword per
/// relay; `nonc_df` forwards each decoded user message in its own slot.
enum class Coding { network_coded, nonc_df };

std::string to_string(Coding coding);

/// Per-link outage constants c_ij (first hop) and c_j (second hop) in W^m.
struct LinkCoefficients {
  Eigen::MatrixXd users;   // M x N
  Eigen::VectorXd relays;  // N
};

/// c = (m (2^(a0/B) - 1) N0 B / (d^-beta Omega))^m / Gamma(m + 1).
double link_coefficient(double m, double snr_threshold, double n0, double bandwidth,
                        double distance, double exponent, double omega);

LinkCoefficients compute_link_coefficients(const ScenarioConfig& config);

/// Decision variables over K periods.
struct Policy {
  Eigen::MatrixXd p_u;                     // M x K user powers (W)
  Eigen::MatrixXd p_r;                     // N x K relay powers (W)
  std::vector<Eigen::MatrixXd> transfers;  // K matrices, M x M, entry (i, i') = E_{i->i'} (J)

  static Policy zeros(const ScenarioConfig& config);

  double transfer(int from, int to, int period) const { return transfers[period](from, to); }
  /// Sum of energy sent by `user` in `period`.
  double sent(int user, int period) const;
  /// Sum of energy addressed to `user` in `period` (before efficiency loss).
  double received(int user, int period) const;
};

/// Throws InvalidInput when the policy dimensions disagree with the scenario.
void check_dimensions(const ScenarioConfig& config, const Policy& policy);

struct EnergyLedger {
  Eigen::MatrixXd available;       // M x K energy available for data in period k
  Eigen::MatrixXd cumulative_in;   // arrivals + initial + eta * received, up to k
  Eigen::MatrixXd cumulative_out;  // consumption before k + sent up to k
};

EnergyLedger energy_ledger(const ScenarioConfig& config, const Policy& policy);

/// Transmission energy plus transfer losses over all periods (J).
double total_energy(const ScenarioConfig& config, const Policy& policy,
                    Coding coding = Coding::network_coded);

/// Number of second-hop slots each relay occupies per period.
int relay_slots(const ScenarioConfig& config, Coding coding);

enum class OutageMode { exact, approximate };

std::string to_string(OutageMode mode);

/// Per-period network outage, split into first-hop (A) and second-hop (B) failure.
struct OutageReport {
  Eigen::VectorXd pr_out;
  Eigen::VectorXd pr_A;
  Eigen::VectorXd pr_B;
  OutageMode mode = OutageMode::exact;
};

/// Expected delivered bits divided by total consumed energy (bits/J).
/// Throws std::domain_error when the total energy is zero.
double energy_efficiency(const ScenarioConfig& config, const Policy& policy,
                         const OutageReport& outage, Coding coding = Coding::network_coded);

/// Expected delivered bits, sum_k M a0 T (1 - Pr_out,k).
double expected_bits(const ScenarioConfig& config, const Eigen::VectorXd& pr_out);

enum class ConstraintClass { causality, power_bounds, transfers, outage };

std::string to_string(ConstraintClass cls);

struct ConstraintAudit {
  ConstraintClass constraint = ConstraintClass::causality;
  /// Largest violation magnitude (J, W or probability); 0 when satisfied.
  double worst_violation = 0.0;
  /// (node, period) pairs that violate; node is -1 for per-period constraints.
  std::vector<std::pair<int, int>> offending;
  bool satisfied = true;
};

struct FeasibilityReport {
  std::vector<ConstraintAudit> audits;
  Eigen::VectorXd outage_exact;  // worst per-period exact outage used for the threshold check
  bool feasible = true;

  const ConstraintAudit& audit(ConstraintClass cls) const;
};

/// Checks causality, power bounds, transfer signs and the EXACT outage
/// threshold. `check_outage = false` skips the threshold (baselines without it).
FeasibilityReport validate_policy(const ScenarioConfig& config, const Policy& policy,
                                  Coding coding = Coding::network_coded, bool check_outage = true);

}  // namespace coopee

#endif  // COOPEE_MODEL_HPP

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

#ifndef COOPEE_SCENARIO_HPP
#define COOPEE_SCENARIO_HPP

#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <json.hpp>

namespace coopee {

/// Raised when a scenario, policy or command line is malformed.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Full problem instance. All quantities in SI units.
///
/// Matrices indexed [user][relay] for the first hop and [relay] for the
/// second hop; arrivals are indexed [user][period]. Indices are 0-based.
struct ScenarioConfig {
  int users = 1;    // M
  int relays = 1;   // N
  int periods = 1;  // K

  double bandwidth = 1.0;  // Hz
  double rate = 1.0;       // bits/s
  double slot = 1.0;       // s
  double p_max = 1.0;      // W
  double eta = 1.0;        // transfer efficiency in (0, 1]
  double fading_m = 1.0;   // Nakagami shape, >= 0.5

  Eigen::MatrixXd omega_h;  // M x N average gains
  Eigen::MatrixXd d_h;      // M x N distances (m)
  Eigen::MatrixXd beta_h;   // M x N path-loss exponents
  Eigen::MatrixXd n0_h;     // M x N noise PSD (W/Hz)

  Eigen::VectorXd omega_g;  // N
  Eigen::VectorXd d_g;      // N
  Eigen::VectorXd beta_g;   // N
  Eigen::VectorXd n0_g;     // N

  Eigen::MatrixXd arrivals;        // M x K harvested energy (J)
  double pr_out_0 = 1e-3;          // per-period outage threshold
  Eigen::VectorXd initial_energy;  // M, J

  /// Dimensionless SNR threshold 2^(rate/bandwidth) - 1.
  double snr_threshold() const;
};

/// Throws InvalidInput naming the offending field (and index) on failure.
void validate(const ScenarioConfig& config);

ScenarioConfig scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const ScenarioConfig& config);

/// Reads, parses and validates a scenario file.
ScenarioConfig load_scenario(const std::string& path);
nlohmann::json load_json_file(const std::string& path);

/// Applies a dotted-path override such as `eta=0.2` or `d_h.0.3=900` to a
/// parsed scenario document. The value is parsed as JSON.
void apply_override(nlohmann::json& doc, std::string_view assignment);

/// Moves every relay Δ metres towards the destination: d_h + Δ, d_g − Δ.
/// Throws InvalidInput when some d_g − Δ is not positive.
ScenarioConfig shift_relays(const ScenarioConfig& config, double delta);

}  // namespace coopee

#endif  // COOPEE_SCENARIO_HPP

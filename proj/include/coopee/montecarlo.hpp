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

#ifndef COOPEE_MONTECARLO_HPP
#define COOPEE_MONTECARLO_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "coopee/model.hpp"
#include "coopee/scenario.hpp"

namespace coopee {

/// Identifies an independent random stream.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

/// Counter-based generator: draw n of a stream is a pure function of
/// (seed, stream_id, n), so streams never overlap and replay exactly.
class CounterRng {
 public:
  explicit CounterRng(const RngSpec& spec);

  std::uint64_t next_u64();
  /// Uniform on (0, 1), never exactly 0 or 1.
  double uniform();
  double normal();
  /// Gamma(shape, 1) variate, shape > 0.
  double gamma(double shape);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// |h|^2 ~ Gamma(m, omega / m), so its mean is omega. Throws
/// std::invalid_argument for omega <= 0 or m < 0.5.
double sample_channel_power_gain(double omega, double m, CounterRng& rng);

struct TrialOutcome {
  std::uint32_t decoded_set = 0;    // relays that decoded every user message
  std::uint32_t forwarded_set = 0;  // decoding relays whose forward reached the destination
  bool success = false;             // at least M forwards arrived
};

/// Per-link gain thresholds for one period: link (i, j) fails iff gain < threshold.
struct PeriodThresholds {
  Eigen::MatrixXd users;   // M x N, +inf for a silent user
  Eigen::VectorXd relays;  // N, +inf for a silent relay

  static PeriodThresholds build(const ScenarioConfig& config, const Eigen::VectorXd& p_u,
                                const Eigen::VectorXd& p_r);
};

/// One two-hop transmission with fresh channel draws.
TrialOutcome simulate_period(const ScenarioConfig& config, const Eigen::VectorXd& p_u,
                             const Eigen::VectorXd& p_r, CounterRng& rng);
TrialOutcome simulate_period(const ScenarioConfig& config, const PeriodThresholds& thresholds,
                             CounterRng& rng);

struct PeriodEstimate {
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double outage = 0.0;
  double ci_low = 0.0;   // Wilson 95%
  double ci_high = 0.0;
  double exact = 0.0;    // analytic outage for comparison
};

struct MonteCarloReport {
  std::vector<PeriodEstimate> periods;
  double empirical_ee = 0.0;
  double analytic_ee = 0.0;
  std::uint64_t seed = 0;
};

struct MonteCarloOptions {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  /// Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
  unsigned threads = 0;
  std::uint64_t chunk = 1u << 16;
};

/// Wilson score interval for `failures` out of `trials`.
std::pair<double, double> wilson_interval(std::uint64_t failures, std::uint64_t trials,
                                          double z = 1.959963984540054);

/// Empirical per-period outage of `policy` with confidence intervals.
/// Throws InvalidInput when trials == 0.
MonteCarloReport estimate_outage(const ScenarioConfig& config, const Policy& policy,
                                 const MonteCarloOptions& options);

}  // namespace coopee

#endif  // COOPEE_MONTECARLO_HPP

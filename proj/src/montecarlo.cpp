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

#include "coopee/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "coopee/outage.hpp"

namespace coopee {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

CounterRng::CounterRng(const RngSpec& spec)
    : key_(splitmix64(spec.seed ^ splitmix64(spec.stream_id + 0x632BE59BD9B4E019ULL))) {}

std::uint64_t CounterRng::next_u64() { return splitmix64(key_ + (counter_++) * kGolden); }

double CounterRng::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

double CounterRng::gamma(double shape) {
  if (shape == 1.0) return -std::log(uniform());
  if (shape < 1.0) {
    // Boost: G(a) = G(a + 1) * U^(1/a).
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_channel_power_gain(double omega, double m, CounterRng& rng) {
  if (!(omega > 0.0) || !(m >= 0.5)) throw std::invalid_argument("need omega > 0 and m >= 0.5");
  return rng.gamma(m) * omega / m;
}

PeriodThresholds PeriodThresholds::build(const ScenarioConfig& c, const Eigen::VectorXd& p_u,
                                         const Eigen::VectorXd& p_r) {
  // Failure iff gain * d^-beta * p < (2^(a0/B) - 1) N0 B.
  const double snr = c.snr_threshold();
  const double inf = std::numeric_limits<double>::infinity();
  PeriodThresholds t;
  t.users.resize(c.users, c.relays);
  t.relays.resize(c.relays);
  for (int i = 0; i < c.users; ++i)
    for (int j = 0; j < c.relays; ++j)
      t.users(i, j) = p_u(i) > 0.0 ? snr * c.n0_h(i, j) * c.bandwidth /
                                         (std::pow(c.d_h(i, j), -c.beta_h(i, j)) * p_u(i))
                                   : inf;
  for (int j = 0; j < c.relays; ++j)
    t.relays(j) = p_r(j) > 0.0 ? snr * c.n0_g(j) * c.bandwidth /
                                     (std::pow(c.d_g(j), -c.beta_g(j)) * p_r(j))
                               : inf;
  return t;
}

TrialOutcome simulate_period(const ScenarioConfig& c, const PeriodThresholds& t, CounterRng& rng) {
  TrialOutcome out;
  for (int j = 0; j < c.relays; ++j) {
    bool decoded = true;
    // Every user link is drawn even after a failure so draw counts stay fixed.
    for (int i = 0; i < c.users; ++i) {
      const double gain = sample_channel_power_gain(c.omega_h(i, j), c.fading_m, rng);
      if (!(gain >= t.users(i, j))) decoded = false;
    }
    const double gain = sample_channel_power_gain(c.omega_g(j), c.fading_m, rng);
    if (!decoded) continue;
    out.decoded_set |= 1u << j;
    if (gain >= t.relays(j)) out.forwarded_set |= 1u << j;
  }
  out.success = std::popcount(out.forwarded_set) >= c.users;
  return out;
}

TrialOutcome simulate_period(const ScenarioConfig& c, const Eigen::VectorXd& p_u,
                             const Eigen::VectorXd& p_r, CounterRng& rng) {
  return simulate_period(c, PeriodThresholds::build(c, p_u, p_r), rng);
}

std::pair<double, double> wilson_interval(std::uint64_t failures, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(failures) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
  return {failures == 0 ? 0.0 : std::max(0.0, centre - half), failures == trials ? 1.0 : std::min(1.0, centre + half)};
}

MonteCarloReport estimate_outage(const ScenarioConfig& c, const Policy& policy,
                                 const MonteCarloOptions& options) {
  if (options.trials == 0) throw InvalidInput("trials must be >= 1");
  if (options.chunk == 0) throw InvalidInput("chunk must be >= 1");
  check_dimensions(c, policy);

  const std::uint64_t chunks = (options.trials + options.chunk - 1) / options.chunk;
  const auto periods = static_cast<std::uint64_t>(c.periods);
  std::vector<PeriodThresholds> thresholds;
  for (int k = 0; k < c.periods; ++k)
    thresholds.push_back(PeriodThresholds::build(c, policy.p_u.col(k), policy.p_r.col(k)));

  // One work item per (period, chunk); stream id = period * 2^32 + chunk.
  const std::uint64_t items = periods * chunks;
  std::vector<std::uint64_t> failures(items, 0);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t item = next++; item < items; item = next++) {
      const std::uint64_t k = item / chunks, chunk = item % chunks;
      const std::uint64_t begin = chunk * options.chunk;
      const std::uint64_t end = std::min(options.trials, begin + options.chunk);
      CounterRng rng({options.seed, (k << 32) | chunk});
      std::uint64_t lost = 0;
      for (std::uint64_t n = begin; n < end; ++n)
        if (!simulate_period(c, thresholds[k], rng).success) ++lost;
      failures[item] = lost;
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, items));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  MonteCarloReport report;
  report.seed = options.seed;
  const OutageReport exact = outage_report(c, policy, OutageMode::exact);
  double delivered = 0.0;
  for (int k = 0; k < c.periods; ++k) {
    PeriodEstimate e;
    e.trials = options.trials;
    for (std::uint64_t chunk = 0; chunk < chunks; ++chunk) e.failures += failures[static_cast<std::uint64_t>(k) * chunks + chunk];
    e.outage = static_cast<double>(e.failures) / static_cast<double>(e.trials);
    std::tie(e.ci_low, e.ci_high) = wilson_interval(e.failures, e.trials);
    e.exact = exact.pr_out(k);
    delivered += 1.0 - e.outage;
    report.periods.push_back(e);
  }
  const double energy = total_energy(c, policy);
  if (energy > 0.0) {
    report.empirical_ee = delivered * c.users * c.rate * c.slot / energy;
    report.analytic_ee = energy_efficiency(c, policy, exact);
  }
  return report;
}

}  // namespace coopee

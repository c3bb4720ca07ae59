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

#include "coopee/model.hpp"

#include <cmath>
#include <stdexcept>

#include "coopee/special.hpp"

namespace coopee {

std::string to_string(Coding coding) {
  return coding == Coding::network_coded ? "network_coded" : "nonc_df";
}

std::string to_string(OutageMode mode) {
  return mode == OutageMode::exact ? "exact" : "approximate";
}

std::string to_string(ConstraintClass cls) {
  switch (cls) {
    case ConstraintClass::causality: return "causality";
    case ConstraintClass::power_bounds: return "power_bounds";
    case ConstraintClass::transfers: return "transfers";
    case ConstraintClass::outage: return "outage";
  }
  return "unknown";
}

double link_coefficient(double m, double snr_threshold, double n0, double bandwidth,
                        double distance, double exponent, double omega) {
  const double gain = std::pow(distance, -exponent) * omega;
  const double base = m * snr_threshold * n0 * bandwidth / gain;
  return std::pow(base, m) / gamma_function(m + 1.0);
}

LinkCoefficients compute_link_coefficients(const ScenarioConfig& c) {
  const double thr = c.snr_threshold();
  LinkCoefficients out;
  out.users.resize(c.users, c.relays);
  out.relays.resize(c.relays);
  for (int i = 0; i < c.users; ++i)
    for (int j = 0; j < c.relays; ++j)
      out.users(i, j) = link_coefficient(c.fading_m, thr, c.n0_h(i, j), c.bandwidth, c.d_h(i, j),
                                         c.beta_h(i, j), c.omega_h(i, j));
  for (int j = 0; j < c.relays; ++j)
    out.relays(j) = link_coefficient(c.fading_m, thr, c.n0_g(j), c.bandwidth, c.d_g(j), c.beta_g(j),
                                     c.omega_g(j));
  return out;
}

Policy Policy::zeros(const ScenarioConfig& c) {
  Policy p;
  p.p_u = Eigen::MatrixXd::Zero(c.users, c.periods);
  p.p_r = Eigen::MatrixXd::Zero(c.relays, c.periods);
  p.transfers.assign(static_cast<std::size_t>(c.periods), Eigen::MatrixXd::Zero(c.users, c.users));
  return p;
}

double Policy::sent(int user, int period) const { return transfers[period].row(user).sum(); }

double Policy::received(int user, int period) const { return transfers[period].col(user).sum(); }

void check_dimensions(const ScenarioConfig& c, const Policy& p) {
  if (p.p_u.rows() != c.users || p.p_u.cols() != c.periods)
    throw InvalidInput("policy p_u must be " + std::to_string(c.users) + "x" + std::to_string(c.periods));
  if (p.p_r.rows() != c.relays || p.p_r.cols() != c.periods)
    throw InvalidInput("policy p_r must be " + std::to_string(c.relays) + "x" + std::to_string(c.periods));
  if (static_cast<int>(p.transfers.size()) != c.periods)
    throw InvalidInput("policy transfers must hold " + std::to_string(c.periods) + " matrices");
  for (const auto& e : p.transfers)
    if (e.rows() != c.users || e.cols() != c.users)
      throw InvalidInput("each transfer matrix must be " + std::to_string(c.users) + "x" +
                         std::to_string(c.users));
}

EnergyLedger energy_ledger(const ScenarioConfig& c, const Policy& p) {
  check_dimensions(c, p);
  EnergyLedger ledger;
  ledger.available.resize(c.users, c.periods);
  ledger.cumulative_in.resize(c.users, c.periods);
  ledger.cumulative_out.resize(c.users, c.periods);
  for (int i = 0; i < c.users; ++i) {
    double in = c.initial_energy(i);
    double out = 0.0;
    for (int k = 0; k < c.periods; ++k) {
      in += c.arrivals(i, k) + c.eta * p.received(i, k);
      out += p.sent(i, k);
      if (k > 0) out += p.p_u(i, k - 1) * c.slot;
      ledger.cumulative_in(i, k) = in;
      ledger.cumulative_out(i, k) = out;
      ledger.available(i, k) = in - out;
    }
  }
  return ledger;
}

int relay_slots(const ScenarioConfig& c, Coding coding) {
  return coding == Coding::network_coded ? 1 : c.users;
}

double total_energy(const ScenarioConfig& c, const Policy& p, Coding coding) {
  check_dimensions(c, p);
  const double slots = relay_slots(c, coding);
  CompensatedSum sum;
  for (int k = 0; k < c.periods; ++k) {
    for (int i = 0; i < c.users; ++i) sum += p.p_u(i, k) * c.slot;
    sum += (1.0 - c.eta) * p.transfers[static_cast<std::size_t>(k)].sum();
    for (int j = 0; j < c.relays; ++j) sum += slots * p.p_r(j, k) * c.slot;
  }
  return sum.value();
}

double expected_bits(const ScenarioConfig& c, const Eigen::VectorXd& pr_out) {
  CompensatedSum sum;
  for (Eigen::Index k = 0; k < pr_out.size(); ++k)
    sum += c.users * c.rate * c.slot * (1.0 - pr_out(k));
  return sum.value();
}

double energy_efficiency(const ScenarioConfig& c, const Policy& p, const OutageReport& outage,
                         Coding coding) {
  const double energy = total_energy(c, p, coding);
  if (!(energy > 0.0)) throw std::domain_error("energy efficiency undefined: total energy is zero");
  return expected_bits(c, outage.pr_out) / energy;
}

const ConstraintAudit& FeasibilityReport::audit(ConstraintClass cls) const {
  for (const auto& a : audits)
    if (a.constraint == cls) return a;
  throw std::out_of_range("no audit for constraint class " + to_string(cls));
}

}  // namespace coopee

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

#include <algorithm>
#include <cmath>

#include "coopee/model.hpp"
#include "coopee/outage.hpp"

namespace coopee {
namespace {

void record(ConstraintAudit& audit, double violation, int node, int period, double tolerance) {
  if (violation > tolerance) {
    audit.satisfied = false;
    audit.offending.emplace_back(node, period);
  }
  audit.worst_violation = std::max(audit.worst_violation, std::max(violation, 0.0));
}

}  // namespace

FeasibilityReport validate_policy(const ScenarioConfig& c, const Policy& p, Coding coding,
                                  bool check_outage) {
  check_dimensions(c, p);
  FeasibilityReport report;

  ConstraintAudit causality;
  causality.constraint = ConstraintClass::causality;
  const EnergyLedger ledger = energy_ledger(c, p);
  for (int i = 0; i < c.users; ++i)
    for (int k = 0; k < c.periods; ++k)
      record(causality, p.p_u(i, k) * c.slot - ledger.available(i, k), i, k, kFeasibilityTolerance);

  // User rows are nodes 0..M-1, relays are reported as M..M+N-1.
  ConstraintAudit power;
  power.constraint = ConstraintClass::power_bounds;
  for (int k = 0; k < c.periods; ++k) {
    for (int i = 0; i < c.users; ++i) {
      const double pu = p.p_u(i, k);
      // p > 0 is strict: a non-positive power is a violation at any tolerance.
      double low = kMinPower - pu;
      if (!(pu > 0.0)) low = std::max(low, 2.0 * kFeasibilityTolerance);
      if (!std::isfinite(pu)) low = HUGE_VAL;
      record(power, std::max(low, pu - c.p_max), i, k, kFeasibilityTolerance);
    }
    for (int j = 0; j < c.relays; ++j) {
      const double pr = p.p_r(j, k);
      const double violation = std::isfinite(pr) ? std::max(-pr, pr - c.p_max) : HUGE_VAL;
      record(power, violation, c.users + j, k, kFeasibilityTolerance);
    }
  }

  ConstraintAudit transfers;
  transfers.constraint = ConstraintClass::transfers;
  for (int k = 0; k < c.periods; ++k) {
    const auto& e = p.transfers[static_cast<std::size_t>(k)];
    for (int i = 0; i < c.users; ++i) {
      double violation = std::abs(e(i, i));
      for (int t = 0; t < c.users; ++t)
        if (t != i) violation = std::max(violation, -e(i, t));
      if (!e.row(i).allFinite()) violation = HUGE_VAL;
      record(transfers, violation, i, k, kFeasibilityTolerance);
    }
  }

  ConstraintAudit outage;
  outage.constraint = ConstraintClass::outage;
  report.outage_exact = Eigen::VectorXd::Zero(c.periods);
  const bool powers_ok = (p.p_u.array() >= 0.0).all() && (p.p_r.array() >= 0.0).all() &&
                         p.p_u.allFinite() && p.p_r.allFinite();
  if (powers_ok) {
    const LinkCoefficients coeffs = compute_link_coefficients(c);
    for (int k = 0; k < c.periods; ++k) {
      double worst = 1.0;
      period_outage(c, coeffs, p.p_u.col(k), p.p_r.col(k), OutageMode::exact, coding, &worst);
      report.outage_exact(k) = worst;
      if (check_outage) {
        const double limit = c.pr_out_0 * (1.0 + kOutageSlack);
        if (worst > limit) {
          outage.satisfied = false;
          outage.offending.emplace_back(-1, k);
        }
        outage.worst_violation = std::max(outage.worst_violation, std::max(worst - c.pr_out_0, 0.0));
      }
    }
  } else if (check_outage) {
    report.outage_exact.setOnes();
    outage.satisfied = false;
    outage.worst_violation = 1.0 - c.pr_out_0;
    for (int k = 0; k < c.periods; ++k) outage.offending.emplace_back(-1, k);
  }

  report.audits = {causality, power, transfers, outage};
  report.feasible = std::all_of(report.audits.begin(), report.audits.end(),
                                [](const ConstraintAudit& a) { return a.satisfied; });
  return report;
}

}  // namespace coopee

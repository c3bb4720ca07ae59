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

#include "coopee/outage.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "coopee/special.hpp"
#include "coopee/subsets.hpp"

namespace coopee {
namespace {

void require_probability(std::span<const double> values, const char* what) {
  for (double v : values)
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument(std::string(what) + " entries must lie in [0, 1]");
}

}  // namespace

LinkParameters LinkParameters::first_hop(const ScenarioConfig& c, int user, int relay) {
  return {c.fading_m, c.rate, c.bandwidth, c.n0_h(user, relay), c.d_h(user, relay),
          c.beta_h(user, relay), c.omega_h(user, relay)};
}

LinkParameters LinkParameters::second_hop(const ScenarioConfig& c, int relay) {
  return {c.fading_m, c.rate, c.bandwidth, c.n0_g(relay), c.d_g(relay), c.beta_g(relay),
          c.omega_g(relay)};
}

double outage_argument(double power, const LinkParameters& l) {
  const double threshold = std::exp2(l.rate / l.bandwidth) - 1.0;
  return l.m * threshold * l.n0 * l.bandwidth / (std::pow(l.distance, -l.exponent) * l.omega * power);
}

double per_link_outage_exact(double power, const LinkParameters& link) {
  if (power == 0.0) return 1.0;
  if (!(power > 0.0)) throw std::invalid_argument("per-link outage needs a nonnegative power");
  return regularized_lower_gamma(link.m, outage_argument(power, link));
}

double per_link_outage_approx(double power, double coefficient, double m) {
  return coefficient * std::pow(power, -m);
}

double relay_decode_prob(std::span<const double> per_link_outages) {
  require_probability(per_link_outages, "per-link outage");
  double rho = 1.0;
  for (double pe : per_link_outages) rho *= 1.0 - pe;
  return rho;
}

OutageBreakdown network_outage_exact(std::span<const double> rho, std::span<const double> pe_relay,
                                     int users) {
  std::vector<double> complement(rho.size());
  for (std::size_t j = 0; j < rho.size(); ++j) complement[j] = 1.0 - rho[j];
  return network_outage_exact(rho, complement, pe_relay, users);
}

OutageBreakdown network_outage_exact(std::span<const double> rho,
                                     std::span<const double> rho_complement,
                                     std::span<const double> pe_relay, int users) {
  const int relays = static_cast<int>(rho.size());
  if (static_cast<int>(pe_relay.size()) != relays || static_cast<int>(rho_complement.size()) != relays)
    throw std::invalid_argument("rho and relay outage vectors must have equal length");
  if (relays < users) throw std::invalid_argument("network outage needs N >= M");
  require_probability(rho, "rho");
  require_probability(rho_complement, "1 - rho");
  require_probability(pe_relay, "relay outage");

  const SubsetTables& tables = SubsetTables::shared(users, relays);

  auto first_hop = [&](std::uint32_t phi) {
    double prod = 1.0;
    for (int j = 0; j < relays; ++j)
      prod *= (phi >> j & 1u) ? rho[static_cast<std::size_t>(j)]
                              : rho_complement[static_cast<std::size_t>(j)];
    return prod;
  };

  CompensatedSum a;
  for (int n = 0; n < users; ++n)
    for (std::uint32_t phi : tables.subsets_of_size(n)) a += first_hop(phi);

  CompensatedSum b;
  for (int n = users; n <= relays; ++n) {
    for (std::uint32_t phi : tables.subsets_of_size(n)) {
      const double reach = first_hop(phi);
      if (reach == 0.0) continue;
      CompensatedSum forward;
      tables.for_each_small_subset(phi, [&](std::uint32_t psi) {
        double prod = 1.0;
        for (int j = 0; j < relays; ++j) {
          if (!(phi >> j & 1u)) continue;
          const double pe = pe_relay[static_cast<std::size_t>(j)];
          prod *= (psi >> j & 1u) ? 1.0 - pe : pe;
        }
        forward += prod;
      });
      b += reach * forward.value();
    }
  }

  OutageBreakdown out;
  out.pr_A = a.value();
  out.pr_B = b.value();
  out.pr_out = out.pr_A + out.pr_B;
  return out;
}

OutageBreakdown network_outage_approx(const Eigen::VectorXd& p_u, const Eigen::VectorXd& p_r,
                                      const LinkCoefficients& coeffs, double m, int users) {
  const auto relays = static_cast<int>(coeffs.relays.size());
  if (p_u.size() != coeffs.users.rows() || p_r.size() != relays)
    throw std::invalid_argument("power vectors do not match the link coefficients");
  if ((p_u.array() <= 0.0).any() || (p_r.array() <= 0.0).any())
    throw std::invalid_argument("approximate outage needs strictly positive powers");

  std::vector<double> first(static_cast<std::size_t>(relays));
  std::vector<double> second(static_cast<std::size_t>(relays));
  for (int j = 0; j < relays; ++j) {
    CompensatedSum s;
    for (Eigen::Index i = 0; i < p_u.size(); ++i) s += per_link_outage_approx(p_u(i), coeffs.users(i, j), m);
    first[static_cast<std::size_t>(j)] = s.value();
    second[static_cast<std::size_t>(j)] = per_link_outage_approx(p_r(j), coeffs.relays(j), m);
  }

  const SubsetTables& tables = SubsetTables::shared(users, relays);
  auto missing = [&](std::uint32_t phi) {
    double prod = 1.0;
    for (int j = 0; j < relays; ++j)
      if (!(phi >> j & 1u)) prod *= first[static_cast<std::size_t>(j)];
    return prod;
  };

  CompensatedSum a;
  for (int n = 0; n < users; ++n)
    for (std::uint32_t phi : tables.subsets_of_size(n)) a += missing(phi);

  CompensatedSum b;
  for (int n = users; n <= relays; ++n) {
    for (std::uint32_t phi : tables.subsets_of_size(n)) {
      CompensatedSum forward;
      tables.for_each_small_subset(phi, [&](std::uint32_t psi) {
        double prod = 1.0;
        for (int j = 0; j < relays; ++j)
          if ((phi >> j & 1u) && !(psi >> j & 1u)) prod *= second[static_cast<std::size_t>(j)];
        forward += prod;
      });
      b += missing(phi) * forward.value();
    }
  }

  OutageBreakdown out;
  out.pr_A = a.value();
  out.pr_B = b.value();
  out.pr_out = out.pr_A + out.pr_B;
  return out;
}

LinkOutages link_outages_exact(const ScenarioConfig& c, const Eigen::VectorXd& p_u,
                               const Eigen::VectorXd& p_r) {
  LinkOutages out;
  out.users.resize(c.users, c.relays);
  out.relays.resize(c.relays);
  for (int i = 0; i < c.users; ++i)
    for (int j = 0; j < c.relays; ++j)
      out.users(i, j) = p_u(i) > 0.0 ? per_link_outage_exact(p_u(i), LinkParameters::first_hop(c, i, j)) : 1.0;
  for (int j = 0; j < c.relays; ++j)
    out.relays(j) = p_r(j) > 0.0 ? per_link_outage_exact(p_r(j), LinkParameters::second_hop(c, j)) : 1.0;
  return out;
}

OutageBreakdown network_outage_from_links(const LinkOutages& links, int users) {
  const auto relays = static_cast<std::size_t>(links.relays.size());
  std::vector<double> rho(relays), complement(relays), pe(relays);
  for (std::size_t j = 0; j < relays; ++j) {
    double log_rho = 0.0;
    for (Eigen::Index i = 0; i < links.users.rows(); ++i)
      log_rho += std::log1p(-links.users(i, static_cast<Eigen::Index>(j)));
    rho[j] = std::exp(log_rho);
    complement[j] = -std::expm1(log_rho);
    pe[j] = links.relays(static_cast<Eigen::Index>(j));
  }
  return network_outage_exact(rho, complement, pe, users);
}

Eigen::VectorXd nonc_user_outage_exact(const LinkOutages& links) {
  const Eigen::Index users = links.users.rows();
  Eigen::VectorXd out(users);
  for (Eigen::Index i = 0; i < users; ++i) {
    double prod = 1.0;
    for (Eigen::Index j = 0; j < links.relays.size(); ++j) {
      const double a = links.users(i, j);
      const double b = links.relays(j);
      prod *= a + b - a * b;
    }
    out(i) = prod;
  }
  return out;
}

Eigen::VectorXd nonc_user_outage_approx(const Eigen::VectorXd& p_u, const Eigen::VectorXd& p_r,
                                        const LinkCoefficients& coeffs, double m) {
  if ((p_u.array() <= 0.0).any() || (p_r.array() <= 0.0).any())
    throw std::invalid_argument("approximate outage needs strictly positive powers");
  Eigen::VectorXd out(p_u.size());
  for (Eigen::Index i = 0; i < p_u.size(); ++i) {
    double prod = 1.0;
    for (Eigen::Index j = 0; j < p_r.size(); ++j)
      prod *= per_link_outage_approx(p_u(i), coeffs.users(i, j), m) +
              per_link_outage_approx(p_r(j), coeffs.relays(j), m);
    out(i) = prod;
  }
  return out;
}

OutageBreakdown period_outage(const ScenarioConfig& c, const LinkCoefficients& coeffs,
                              const Eigen::VectorXd& p_u, const Eigen::VectorXd& p_r,
                              OutageMode mode, Coding coding, double* worst) {
  OutageBreakdown out;
  if (coding == Coding::network_coded) {
    out = mode == OutageMode::exact
              ? network_outage_from_links(link_outages_exact(c, p_u, p_r), c.users)
              : network_outage_approx(p_u, p_r, coeffs, c.fading_m, c.users);
    if (worst) *worst = out.pr_out;
    return out;
  }

  Eigen::VectorXd per_user;
  Eigen::VectorXd first_hop(c.users);
  if (mode == OutageMode::exact) {
    const LinkOutages links = link_outages_exact(c, p_u, p_r);
    per_user = nonc_user_outage_exact(links);
    for (int i = 0; i < c.users; ++i) first_hop(i) = links.users.row(i).prod();
  } else {
    per_user = nonc_user_outage_approx(p_u, p_r, coeffs, c.fading_m);
    for (int i = 0; i < c.users; ++i) {
      double prod = 1.0;
      for (int j = 0; j < c.relays; ++j) prod *= per_link_outage_approx(p_u(i), coeffs.users(i, j), c.fading_m);
      first_hop(i) = prod;
    }
  }
  out.pr_out = per_user.mean();
  out.pr_A = first_hop.mean();
  out.pr_B = out.pr_out - out.pr_A;
  if (worst) *worst = per_user.maxCoeff();
  return out;
}

OutageReport outage_report(const ScenarioConfig& c, const Policy& policy, OutageMode mode,
                           Coding coding) {
  check_dimensions(c, policy);
  const LinkCoefficients coeffs = compute_link_coefficients(c);
  OutageReport report;
  report.mode = mode;
  report.pr_out.resize(c.periods);
  report.pr_A.resize(c.periods);
  report.pr_B.resize(c.periods);
  for (int k = 0; k < c.periods; ++k) {
    const OutageBreakdown b = period_outage(c, coeffs, policy.p_u.col(k), policy.p_r.col(k), mode, coding);
    report.pr_out(k) = b.pr_out;
    report.pr_A(k) = b.pr_A;
    report.pr_B(k) = b.pr_B;
  }
  return report;
}

}  // namespace coopee

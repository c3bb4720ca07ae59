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

#include "coopee/baselines.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "coopee/outage.hpp"

namespace coopee {

std::string to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::depleted_energy: return "depleted_energy";
    case BaselineKind::no_transfer: return "no_transfer";
    case BaselineKind::uniform_power: return "uniform_power";
    case BaselineKind::nonc_df: return "nonc_df";
  }
  return "unknown";
}

BaselineKind baseline_from_string(const std::string& name) {
  for (BaselineKind k : {BaselineKind::depleted_energy, BaselineKind::no_transfer,
                         BaselineKind::uniform_power, BaselineKind::nonc_df})
    if (to_string(k) == name) return k;
  throw InvalidInput("unknown baseline '" + name + "'");
}

SolveResult depleted_energy_policy(const ScenarioConfig& config, const SolverOptions& options,
                                   bool allow_transfers) {
  ProblemVariant v;
  v.depleted = true;
  v.transfers = allow_transfers;
  return dinkelbach_optimize(config, options, v);
}

SolveResult no_transfer_policy(const ScenarioConfig& config, const SolverOptions& options) {
  ProblemVariant v;
  v.transfers = false;
  return dinkelbach_optimize(config, options, v);
}

SolveResult nonc_df_policy(const ScenarioConfig& config, const SolverOptions& options) {
  ProblemVariant v;
  v.coding = Coding::nonc_df;
  return dinkelbach_optimize(config, options, v);
}

bool schedule_transfers(const ScenarioConfig& c, Policy& policy) {
  check_dimensions(c, policy);
  const int m = c.users;
  std::vector<double> battery(c.initial_energy.data(), c.initial_energy.data() + m);
  bool ok = true;
  for (int k = 0; k < c.periods; ++k) {
    auto& e = policy.transfers[static_cast<std::size_t>(k)];
    e.setZero();
    std::vector<double> slack(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      battery[i] += c.arrivals(i, k);
      slack[i] = battery[i] - policy.p_u(i, k) * c.slot;
    }
    for (int i = 0; i < m; ++i) {
      if (slack[i] >= -kFeasibilityTolerance) continue;
      for (int o = 0; o < m && slack[i] < 0.0; ++o) {
        if (o == i || slack[o] <= 0.0) continue;
        const double send = std::min(slack[o], -slack[i] / c.eta);
        e(o, i) += send;
        slack[o] -= send;
        slack[i] += c.eta * send;
      }
      if (slack[i] < -kFeasibilityTolerance) ok = false;
    }
    for (int i = 0; i < m; ++i) battery[i] = std::max(slack[i], 0.0);
  }
  return ok;
}

PolicyEvaluation uniform_power_policy(const ScenarioConfig& config, const SolveResult& reference) {
  validate(config);
  check_dimensions(config, reference.policy);
  PolicyEvaluation out;
  const double mean =
      (config.arrivals.sum() + config.initial_energy.sum()) / (config.users * config.periods * config.slot);
  double power = std::min(config.p_max, mean);

  auto attempt = [&](double p, Policy& policy) {
    policy = Policy::zeros(config);
    policy.p_u.setConstant(p);
    policy.p_r = reference.policy.p_r;
    return schedule_transfers(config, policy);
  };

  Policy policy;
  if (!attempt(power, policy)) {
    // Transfer losses leave less than the mean: find the largest causal constant power.
    double lo = 0.0, hi = power;
    for (int it = 0; it < 100 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      Policy trial;
      (attempt(mid, trial) ? lo : hi) = mid;
    }
    power = lo;
    attempt(power, policy);
    out.power_reduced = true;
    out.message = "mean arrival power is not causally reachable; constant power lowered";
  }
  out.uniform_power = power;
  out.policy = policy;
  out.feasibility = validate_policy(config, policy, Coding::network_coded, false);
  out.feasible = out.feasibility.feasible && power > 0.0;
  if (power > 0.0 && (policy.p_r.array() > 0.0).any()) {
    out.outage = outage_report(config, policy, OutageMode::exact);
    out.ee_exact = energy_efficiency(config, policy, out.outage);
  } else {
    out.outage.pr_out = out.outage.pr_A = Eigen::VectorXd::Ones(config.periods);
    out.outage.pr_B = Eigen::VectorXd::Zero(config.periods);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Grid oracle

namespace {

constexpr int kMaxOracleRelays = 3;

/// Network outage by enumerating decode and forward patterns directly.
double enumerate_outage(const double* rho, const double* pe, int relays, int users) {
  double total = 0.0;
  const std::uint32_t full = (1u << relays) - 1u;
  for (std::uint32_t decoded = 0; decoded <= full; ++decoded) {
    double p_decoded = 1.0;
    for (int j = 0; j < relays; ++j) p_decoded *= (decoded >> j & 1u) ? rho[j] : 1.0 - rho[j];
    if (std::popcount(decoded) < users) {
      total += p_decoded;
      continue;
    }
    double fail = 0.0;
    for (std::uint32_t fwd = decoded;; fwd = (fwd - 1) & decoded) {
      if (std::popcount(fwd) < users) {
        double p = 1.0;
        for (int j = 0; j < relays; ++j)
          if (decoded >> j & 1u) p *= (fwd >> j & 1u) ? 1.0 - pe[j] : pe[j];
        fail += p;
      }
      if (fwd == 0) break;
    }
    total += p_decoded * fail;
  }
  return total;
}

double first_hop_failure(const double* rho, int relays, int users) {
  double total = 0.0;
  for (std::uint32_t decoded = 0; decoded < (1u << relays); ++decoded) {
    if (std::popcount(decoded) >= users) continue;
    double p = 1.0;
    for (int j = 0; j < relays; ++j) p *= (decoded >> j & 1u) ? rho[j] : 1.0 - rho[j];
    total += p;
  }
  return total;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> g(static_cast<std::size_t>(points));
  const double a = std::log(lo), b = std::log(hi);
  for (int s = 0; s < points; ++s)
    g[static_cast<std::size_t>(s)] = points == 1 ? lo : std::exp(a + (b - a) * s / (points - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

struct ParetoPoint {
  double cost;    // sum of relay powers (W)
  double outage;  // exact network outage
  int relay_combo;
};

class GridOracle {
 public:
  GridOracle(const ScenarioConfig& c, const GridSpec& spec) : c_(c), spec_(spec) {
    m_ = c.users;
    n_ = c.relays;
    g_ = spec.points;
    user_grid_.assign(static_cast<std::size_t>(m_ * c.periods), log_grid(spec.p_min, c.p_max, g_));
    relay_grid_.assign(static_cast<std::size_t>(n_ * c.periods), log_grid(spec.p_min, c.p_max, g_));
    user_combos_ = ipow(g_, m_);
    relay_combos_ = ipow(g_, n_);
  }

  /// Runs one grid pass. Returns false when no grid point is feasible.
  bool run_pass() {
    build_pareto();
    return dinkelbach();
  }

  void zoom() {
    for (int k = 0; k < c_.periods; ++k) {
      for (int i = 0; i < m_; ++i) rezoom(user_grid_[slot(i, k)], digit(best_users_[k], i));
      const int combo = best_relays_[static_cast<std::size_t>(k)];
      for (int j = 0; j < n_; ++j) rezoom(relay_grid_[rslot(j, k)], digit(combo, j));
    }
  }

  Policy policy() const {
    Policy p = Policy::zeros(c_);
    for (int k = 0; k < c_.periods; ++k) {
      for (int i = 0; i < m_; ++i)
        p.p_u(i, k) = user_grid_[slot(i, k)][static_cast<std::size_t>(digit(best_users_[k], i))];
      for (int j = 0; j < n_; ++j)
        p.p_r(j, k) = relay_grid_[rslot(j, k)][static_cast<std::size_t>(
            digit(best_relays_[static_cast<std::size_t>(k)], j))];
    }
    schedule_transfers(c_, p);
    return p;
  }

  double q() const { return q_; }
  const std::vector<DinkelbachStep>& trace() const { return trace_; }

 private:
  static int ipow(int base, int exp) {
    int r = 1;
    for (int e = 0; e < exp; ++e) r *= base;
    return r;
  }
  int digit(int combo, int position) const {
    for (int s = 0; s < position; ++s) combo /= g_;
    return combo % g_;
  }
  std::size_t slot(int i, int k) const { return static_cast<std::size_t>(k * m_ + i); }
  std::size_t rslot(int j, int k) const { return static_cast<std::size_t>(k * n_ + j); }

  void rezoom(std::vector<double>& grid, int index) {
    const int lo = std::max(index - spec_.zoom_cells, 0);
    const int hi = std::min(index + spec_.zoom_cells, g_ - 1);
    const double incumbent = grid[static_cast<std::size_t>(index)];
    grid = log_grid(grid[static_cast<std::size_t>(lo)], grid[static_cast<std::size_t>(hi)], g_);
    // Keep the incumbent on the new grid so a refinement never loses ground.
    auto nearest = std::min_element(grid.begin(), grid.end(), [&](double a, double b) {
      return std::abs(std::log(a / incumbent)) < std::abs(std::log(b / incumbent));
    });
    *nearest = incumbent;
  }

  void build_pareto() {
    pareto_.assign(static_cast<std::size_t>(c_.periods), {});
    std::array<double, kMaxOracleRelays> rho{};
    for (int k = 0; k < c_.periods; ++k) {
      // Per-link exact outages on this period's grids.
      std::vector<std::vector<double>> user_link(static_cast<std::size_t>(m_ * n_));
      for (int i = 0; i < m_; ++i)
        for (int j = 0; j < n_; ++j) {
          const LinkParameters link = LinkParameters::first_hop(c_, i, j);
          auto& v = user_link[static_cast<std::size_t>(i * n_ + j)];
          for (double p : user_grid_[slot(i, k)]) v.push_back(per_link_outage_exact(p, link));
        }
      std::vector<std::vector<double>> relay_link(static_cast<std::size_t>(n_));
      for (int j = 0; j < n_; ++j) {
        const LinkParameters link = LinkParameters::second_hop(c_, j);
        for (double p : relay_grid_[rslot(j, k)]) relay_link[static_cast<std::size_t>(j)].push_back(per_link_outage_exact(p, link));
      }
      // Relay combinations in increasing total power.
      std::vector<std::pair<double, int>> order(static_cast<std::size_t>(relay_combos_));
      for (int r = 0; r < relay_combos_; ++r) {
        double cost = 0.0;
        for (int j = 0; j < n_; ++j) cost += relay_grid_[rslot(j, k)][static_cast<std::size_t>(digit(r, j))];
        order[static_cast<std::size_t>(r)] = {cost, r};
      }
      std::sort(order.begin(), order.end());
      std::vector<double> order_pe(static_cast<std::size_t>(relay_combos_ * n_));
      for (int s = 0; s < relay_combos_; ++s)
        for (int j = 0; j < n_; ++j)
          order_pe[static_cast<std::size_t>(s * n_ + j)] =
              relay_link[static_cast<std::size_t>(j)][static_cast<std::size_t>(digit(order[static_cast<std::size_t>(s)].second, j))];

      auto& lists = pareto_[static_cast<std::size_t>(k)];
      lists.assign(static_cast<std::size_t>(user_combos_), {});
      for (int u = 0; u < user_combos_; ++u) {
        for (int j = 0; j < n_; ++j) {
          double r = 1.0;
          for (int i = 0; i < m_; ++i)
            r *= 1.0 - user_link[static_cast<std::size_t>(i * n_ + j)][static_cast<std::size_t>(digit(u, i))];
          rho[static_cast<std::size_t>(j)] = r;
        }
        // Too few relays decode: no relay power can rescue this user combination.
        if (first_hop_failure(rho.data(), n_, m_) > c_.pr_out_0) continue;
        double best = std::numeric_limits<double>::infinity();
        auto& list = lists[static_cast<std::size_t>(u)];
        for (int s = 0; s < relay_combos_; ++s) {
          const double out = enumerate_outage(rho.data(), &order_pe[static_cast<std::size_t>(s * n_)], n_, m_);
          if (out > c_.pr_out_0 || out >= best) continue;
          best = out;
          list.push_back({order[static_cast<std::size_t>(s)].first, out, order[static_cast<std::size_t>(s)].second});
        }
      }
    }
  }

  /// User energy plus transfer loss of a power assignment, or +inf when not causal.
  double user_energy(const std::vector<int>& combos) const {
    std::array<double, 2> battery{c_.initial_energy(0), m_ > 1 ? c_.initial_energy(1) : 0.0};
    double spent = 0.0, sent = 0.0;
    for (int k = 0; k < c_.periods; ++k) {
      std::array<double, 2> slack{};
      for (int i = 0; i < m_; ++i) {
        const double e = user_grid_[slot(i, k)][static_cast<std::size_t>(digit(combos[static_cast<std::size_t>(k)], i))] * c_.slot;
        spent += e;
        battery[static_cast<std::size_t>(i)] += c_.arrivals(i, k);
        slack[static_cast<std::size_t>(i)] = battery[static_cast<std::size_t>(i)] - e;
      }
      for (int i = 0; i < m_; ++i) {
        double& need = slack[static_cast<std::size_t>(i)];
        if (need >= -kFeasibilityTolerance) continue;
        if (m_ == 1) return std::numeric_limits<double>::infinity();
        double& give = slack[static_cast<std::size_t>(1 - i)];
        const double send = -need / c_.eta;
        if (give < send - kFeasibilityTolerance) return std::numeric_limits<double>::infinity();
        give -= send;
        need = 0.0;
        sent += send;
      }
      for (int i = 0; i < m_; ++i) battery[static_cast<std::size_t>(i)] = std::max(slack[static_cast<std::size_t>(i)], 0.0);
    }
    return spent + (1.0 - c_.eta) * sent;
  }

  bool dinkelbach() {
    const int k_count = c_.periods;
    long long total = 1;
    for (int k = 0; k < k_count; ++k) total *= user_combos_;
    const double bits_per_period = m_ * c_.rate * c_.slot;

    // Causal user energy per joint combination (independent of q).
    std::vector<double> energy(static_cast<std::size_t>(total));
    std::vector<int> combos(static_cast<std::size_t>(k_count));
    for (long long idx = 0; idx < total; ++idx) {
      long long rest = idx;
      bool usable = true;
      for (int k = 0; k < k_count; ++k) {
        combos[static_cast<std::size_t>(k)] = static_cast<int>(rest % user_combos_);
        rest /= user_combos_;
        if (pareto_[static_cast<std::size_t>(k)][static_cast<std::size_t>(combos[static_cast<std::size_t>(k)])].empty()) usable = false;
      }
      energy[static_cast<std::size_t>(idx)] = usable ? user_energy(combos) : std::numeric_limits<double>::infinity();
    }

    double q = 0.0;
    trace_.clear();
    bool found = false;
    std::vector<std::vector<double>> best_value(static_cast<std::size_t>(k_count));
    std::vector<std::vector<int>> best_point(static_cast<std::size_t>(k_count));
    for (int outer = 0; outer < 200; ++outer) {
      for (int k = 0; k < k_count; ++k) {
        auto& value = best_value[static_cast<std::size_t>(k)];
        auto& point = best_point[static_cast<std::size_t>(k)];
        value.assign(static_cast<std::size_t>(user_combos_), -std::numeric_limits<double>::infinity());
        point.assign(static_cast<std::size_t>(user_combos_), -1);
        for (int u = 0; u < user_combos_; ++u) {
          const auto& list = pareto_[static_cast<std::size_t>(k)][static_cast<std::size_t>(u)];
          for (std::size_t s = 0; s < list.size(); ++s) {
            const double v = bits_per_period * (1.0 - list[s].outage) - q * c_.slot * list[s].cost;
            if (v > value[static_cast<std::size_t>(u)]) {
              value[static_cast<std::size_t>(u)] = v;
              point[static_cast<std::size_t>(u)] = static_cast<int>(s);
            }
          }
        }
      }
      double best = -std::numeric_limits<double>::infinity();
      long long arg = -1;
      for (long long idx = 0; idx < total; ++idx) {
        const double e = energy[static_cast<std::size_t>(idx)];
        if (!std::isfinite(e)) continue;
        long long rest = idx;
        double v = -q * e;
        for (int k = 0; k < k_count; ++k) {
          v += best_value[static_cast<std::size_t>(k)][static_cast<std::size_t>(rest % user_combos_)];
          rest /= user_combos_;
        }
        if (v > best) {
          best = v;
          arg = idx;
        }
      }
      if (arg < 0) return found;
      found = true;

      // Ratio at the maximizer.
      long long rest = arg;
      double bits = 0.0, e_total = energy[static_cast<std::size_t>(arg)];
      best_users_.assign(static_cast<std::size_t>(k_count), 0);
      best_relays_.assign(static_cast<std::size_t>(k_count), 0);
      for (int k = 0; k < k_count; ++k) {
        const int u = static_cast<int>(rest % user_combos_);
        rest /= user_combos_;
        const auto& pt = pareto_[static_cast<std::size_t>(k)][static_cast<std::size_t>(u)]
                                [static_cast<std::size_t>(best_point[static_cast<std::size_t>(k)][static_cast<std::size_t>(u)])];
        bits += bits_per_period * (1.0 - pt.outage);
        e_total += c_.slot * pt.cost;
        best_users_[static_cast<std::size_t>(k)] = u;
        best_relays_[static_cast<std::size_t>(k)] = pt.relay_combo;
      }
      trace_.push_back({q, best, 0});
      const double next = bits / e_total;
      if (next <= q * (1.0 + 1e-14)) break;
      q = next;
    }
    q_ = q;
    return found;
  }

  const ScenarioConfig& c_;
  GridSpec spec_;
  int m_ = 1, n_ = 1, g_ = 64;
  int user_combos_ = 1, relay_combos_ = 1;
  std::vector<std::vector<double>> user_grid_, relay_grid_;
  std::vector<std::vector<std::vector<ParetoPoint>>> pareto_;  // [k][user combo]
  std::vector<int> best_users_, best_relays_;
  std::vector<DinkelbachStep> trace_;
  double q_ = 0.0;
};

}  // namespace

SolveResult brute_force_optimize(const ScenarioConfig& config, const GridSpec& grid) {
  validate(config);
  if (config.users > 2 || config.users * config.periods > 4 || config.users + config.relays > 4 ||
      config.relays > kMaxOracleRelays)
    throw InvalidInput("grid oracle supports M <= 2, M*K <= 4 and M+N <= 4");
  if (grid.points < 2 || grid.refinements < 0 || grid.zoom_cells < 1 || !(grid.p_min > 0.0))
    throw InvalidInput("grid needs points >= 2, refinements >= 0, zoom_cells >= 1 and p_min > 0");

  SolveResult result;
  result.enforced_threshold = config.pr_out_0;
  GridOracle oracle(config, grid);
  if (!oracle.run_pass()) {
    result.status = SolveStatus::infeasible;
    result.binding = ConstraintClass::outage;
    result.policy = Policy::zeros(config);
    result.message = "no grid point meets the outage threshold causally";
    return result;
  }
  for (int pass = 0; pass < grid.refinements; ++pass) {
    oracle.zoom();
    oracle.run_pass();
  }
  result.policy = oracle.policy();
  result.trace = oracle.trace();
  result.feasibility = validate_policy(config, result.policy);
  const OutageReport exact = outage_report(config, result.policy, OutageMode::exact);
  result.ee_exact = energy_efficiency(config, result.policy, exact);
  result.q_star = result.ee_exact;
  result.status = result.feasibility.feasible ? SolveStatus::converged : SolveStatus::solver_failure;
  return result;
}

}  // namespace coopee

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

#include "programs.hpp"

#include <algorithm>
#include <cmath>

namespace coopee::detail {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

double energy_scale(const ScenarioConfig& c) {
  const double total = (c.arrivals.sum() + c.initial_energy.sum()) / c.users;
  return total > 0.0 ? total : c.p_max * c.slot;
}

/// Energy each user may spend in period k if nothing is saved: arrivals plus initial storage at k = 0.
MatrixXd period_budget(const ScenarioConfig& c) {
  MatrixXd budget = c.arrivals;
  budget.col(0) += c.initial_energy;
  return budget;
}

double clamp_log(double value, double lo, double hi) {
  const double margin = 1e-3 * (hi - lo);
  return std::clamp(value, lo + margin, hi - margin);
}

}  // namespace

PeriodOutage::PeriodOutage(const OutageModel& model, double threshold)
    : model_(&model), log_threshold_(std::log(threshold)) {}

double PeriodOutage::log_constraint(int c, const VectorXd& y, VectorXd* gradient,
                                    MatrixXd* hessian) const {
  const Posynomial& f = model_->constraints[static_cast<std::size_t>(c)];
  if (gradient == nullptr) return std::log(f.value(y)) - log_threshold_;
  VectorXd g;
  MatrixXd h;
  const double value = f.evaluate(y, g, hessian != nullptr ? &h : nullptr);
  *gradient = g / value;
  if (hessian != nullptr) *hessian = h / value - (*gradient) * gradient->transpose();
  return std::log(value) - log_threshold_;
}

double PeriodOutage::lost(const VectorXd& y, VectorXd* gradient, MatrixXd* hessian) const {
  if (gradient == nullptr) return model_->lost_messages.value(y);
  return model_->lost_messages.evaluate(y, *gradient, hessian);
}

// ---------------------------------------------------------------------------

MainProgram::MainProgram(const ScenarioConfig& config, const OutageModel& model,
                         bool allow_transfers, double threshold, double p_min)
    : config_(config),
      outage_(model, threshold),
      transfers_(allow_transfers && config.users > 1),
      log_min_(std::log(p_min)),
      log_max_(std::log(config.p_max)),
      energy_scale_(energy_scale(config)) {
  const Index m = config.users, n = config.relays, k = config.periods;
  powers_u_ = m * k;
  powers_r_ = n * k;
  transfer_count_ = transfers_ ? m * (m - 1) * k : 0;
  size_ = powers_u_ + powers_r_ + transfer_count_;
  scale_ = static_cast<double>(m * k) * config.rate * config.slot;

  cumulative_arrivals_ = period_budget(config);
  for (int p = 1; p < config.periods; ++p)
    cumulative_arrivals_.col(p) += cumulative_arrivals_.col(p - 1);
}

Index MainProgram::transfer_index(int from, int to, int k) const {
  if (!transfers_ || from == to) return -1;
  const int m = config_.users;
  const int slot = from * (m - 1) + (to < from ? to : to - 1);
  return powers_u_ + powers_r_ + static_cast<Index>(k) * m * (m - 1) + slot;
}

Index MainProgram::hard_count() const { return 2 * (powers_u_ + powers_r_) + transfer_count_; }

Index MainProgram::soft_count() const {
  return powers_u_ + static_cast<Index>(config_.periods) * outage_.constraints_per_period();
}

VectorXd MainProgram::period_y(const VectorXd& z, int k) const {
  VectorXd y(config_.users + config_.relays);
  y.head(config_.users) = z.segment(user_index(0, k), config_.users);
  y.tail(config_.relays) = z.segment(relay_index(0, k), config_.relays);
  return y;
}

void MainProgram::scatter_period(int k, const VectorXd& gy, const MatrixXd& hy, double weight,
                                 VectorXd& gradient, MatrixXd& hessian) const {
  const Index m = config_.users, n = config_.relays;
  const Index u = user_index(0, k), r = relay_index(0, k);
  gradient.segment(u, m) += weight * gy.head(m);
  gradient.segment(r, n) += weight * gy.tail(n);
  hessian.block(u, u, m, m) += weight * hy.topLeftCorner(m, m);
  hessian.block(u, r, m, n) += weight * hy.topRightCorner(m, n);
  hessian.block(r, u, n, m) += weight * hy.bottomLeftCorner(n, m);
  hessian.block(r, r, n, n) += weight * hy.bottomRightCorner(n, n);
}

double MainProgram::transfer_sum(const VectorXd& z) const {
  return transfer_count_ > 0 ? z.tail(transfer_count_).sum() : 0.0;
}

double MainProgram::lost_bits(const VectorXd& z) const {
  double lost = 0.0;
  for (int k = 0; k < config_.periods; ++k) lost += outage_.lost(period_y(z, k), nullptr, nullptr);
  return config_.rate * config_.slot * lost;
}

double MainProgram::energy(const VectorXd& z) const {
  const double users = z.head(powers_u_).array().exp().sum();
  const double relays = z.segment(powers_u_, powers_r_).array().exp().sum();
  const int slots = outage_.model().relay_slots;
  return config_.slot * (users + slots * relays) + (1.0 - config_.eta) * transfer_sum(z);
}

void MainProgram::objective_derivatives(const VectorXd& z, VectorXd& gradient,
                                        MatrixXd& hessian) const {
  gradient = VectorXd::Zero(size_);
  hessian = MatrixXd::Zero(size_, size_);
  const double lost_weight = config_.rate * config_.slot / scale_;
  VectorXd gy;
  MatrixXd hy;
  for (int k = 0; k < config_.periods; ++k) {
    outage_.lost(period_y(z, k), &gy, &hy);
    scatter_period(k, gy, hy, lost_weight, gradient, hessian);
  }
  const double w = q_ * config_.slot / scale_;
  const double slots = outage_.model().relay_slots;
  for (Index v = 0; v < powers_u_ + powers_r_; ++v) {
    const double e = (v < powers_u_ ? w : w * slots) * std::exp(z(v));
    gradient(v) += e;
    hessian(v, v) += e;
  }
  if (transfer_count_ > 0)
    gradient.tail(transfer_count_).array() += q_ * (1.0 - config_.eta) / scale_;
}

void MainProgram::hard_values(const VectorXd& z, VectorXd& values) const {
  values.resize(hard_count());
  const Index powers = powers_u_ + powers_r_;
  for (Index v = 0; v < powers; ++v) {
    values(2 * v) = z(v) - log_max_;
    values(2 * v + 1) = log_min_ - z(v);
  }
  if (transfer_count_ > 0) values.tail(transfer_count_) = -z.tail(transfer_count_);
}

void MainProgram::hard_derivatives(const VectorXd&, const VectorXd&, MatrixXd& jacobian,
                                   MatrixXd& weighted_hessian) const {
  jacobian = MatrixXd::Zero(hard_count(), size_);
  const Index powers = powers_u_ + powers_r_;
  for (Index v = 0; v < powers; ++v) {
    jacobian(2 * v, v) = 1.0;
    jacobian(2 * v + 1, v) = -1.0;
  }
  for (Index e = 0; e < transfer_count_; ++e) jacobian(2 * powers + e, powers + e) = -1.0;
  weighted_hessian = MatrixXd::Zero(size_, size_);
}

void MainProgram::soft_values(const VectorXd& z, VectorXd& values) const {
  values.resize(soft_count());
  const int m = config_.users;
  VectorXd running = VectorXd::Zero(m);
  for (int k = 0; k < config_.periods; ++k) {
    for (int i = 0; i < m; ++i) {
      double spent = config_.slot * std::exp(z(user_index(i, k)));
      for (int o = 0; o < m && transfers_; ++o) {
        if (o == i) continue;
        spent += z(transfer_index(i, o, k)) - config_.eta * z(transfer_index(o, i, k));
      }
      running(i) += spent;
      values(user_index(i, k)) = (running(i) - cumulative_arrivals_(i, k)) / energy_scale_;
    }
  }
  const int per = outage_.constraints_per_period();
  for (int k = 0; k < config_.periods; ++k) {
    const VectorXd y = period_y(z, k);
    for (int c = 0; c < per; ++c)
      values(powers_u_ + k * per + c) = outage_.log_constraint(c, y, nullptr, nullptr);
  }
}

void MainProgram::soft_derivatives(const VectorXd& z, const VectorXd& weights, MatrixXd& jacobian,
                                   MatrixXd& weighted_hessian) const {
  jacobian = MatrixXd::Zero(soft_count(), size_);
  weighted_hessian = MatrixXd::Zero(size_, size_);
  const int m = config_.users;
  const double inv = 1.0 / energy_scale_;
  for (int k = 0; k < config_.periods; ++k) {
    for (int i = 0; i < m; ++i) {
      const Index row = user_index(i, k);
      for (int l = 0; l <= k; ++l) {
        const Index v = user_index(i, l);
        const double e = config_.slot * std::exp(z(v)) * inv;
        jacobian(row, v) = e;
        weighted_hessian(v, v) += weights(row) * e;
        for (int o = 0; o < m && transfers_; ++o) {
          if (o == i) continue;
          jacobian(row, transfer_index(i, o, l)) = inv;
          jacobian(row, transfer_index(o, i, l)) = -config_.eta * inv;
        }
      }
    }
  }
  const int per = outage_.constraints_per_period();
  VectorXd gy;
  MatrixXd hy;
  VectorXd row_gradient(size_);
  for (int k = 0; k < config_.periods; ++k) {
    const VectorXd y = period_y(z, k);
    for (int c = 0; c < per; ++c) {
      const Index row = powers_u_ + k * per + c;
      outage_.log_constraint(c, y, &gy, &hy);
      jacobian.row(row).segment(user_index(0, k), m) = gy.head(m).transpose();
      jacobian.row(row).segment(relay_index(0, k), config_.relays) = gy.tail(config_.relays).transpose();
      row_gradient.setZero();
      scatter_period(k, VectorXd::Zero(gy.size()), hy, weights(row), row_gradient, weighted_hessian);
    }
  }
}

Policy MainProgram::to_policy(const VectorXd& z) const {
  Policy policy = Policy::zeros(config_);
  for (int k = 0; k < config_.periods; ++k) {
    for (int i = 0; i < config_.users; ++i) policy.p_u(i, k) = std::exp(z(user_index(i, k)));
    for (int j = 0; j < config_.relays; ++j) policy.p_r(j, k) = std::exp(z(relay_index(j, k)));
    if (!transfers_) continue;
    for (int i = 0; i < config_.users; ++i)
      for (int o = 0; o < config_.users; ++o)
        if (o != i) policy.transfers[static_cast<std::size_t>(k)](i, o) = z(transfer_index(i, o, k));
  }
  return policy;
}

VectorXd MainProgram::from_policy(const Policy& policy) const {
  VectorXd z(size_);
  for (int k = 0; k < config_.periods; ++k) {
    for (int i = 0; i < config_.users; ++i) z(user_index(i, k)) = std::log(policy.p_u(i, k));
    for (int j = 0; j < config_.relays; ++j) z(relay_index(j, k)) = std::log(policy.p_r(j, k));
    if (!transfers_) continue;
    for (int i = 0; i < config_.users; ++i)
      for (int o = 0; o < config_.users; ++o)
        if (o != i) z(transfer_index(i, o, k)) = policy.transfer(i, o, k);
  }
  return z;
}

VectorXd MainProgram::start_point() const {
  // Depleted-energy powers pulled 10% toward the centre of the log box.
  const double centre = 0.5 * (log_min_ + log_max_);
  const MatrixXd budget = period_budget(config_);
  VectorXd z(size_);
  for (int k = 0; k < config_.periods; ++k) {
    for (int i = 0; i < config_.users; ++i) {
      const double p = std::max(budget(i, k) / config_.slot, std::exp(log_min_) * 1e3);
      z(user_index(i, k)) = clamp_log(0.9 * std::log(p) + 0.1 * centre, log_min_, log_max_);
    }
    for (int j = 0; j < config_.relays; ++j)
      z(relay_index(j, k)) =
          clamp_log(0.9 * std::log(config_.p_max / 10.0) + 0.1 * centre, log_min_, log_max_);
  }
  if (transfer_count_ > 0) z.tail(transfer_count_).setConstant(1e-6 * energy_scale_);
  return z;
}

ConstraintClass MainProgram::hard_class(Index c) const {
  return c < 2 * (powers_u_ + powers_r_) ? ConstraintClass::power_bounds : ConstraintClass::transfers;
}

ConstraintClass MainProgram::soft_class(Index c) const {
  return c < powers_u_ ? ConstraintClass::causality : ConstraintClass::outage;
}

// ---------------------------------------------------------------------------

DepletedProgram::DepletedProgram(const ScenarioConfig& config, const OutageModel& model,
                                 bool allow_transfers, double threshold, double p_min)
    : config_(config),
      outage_(model, threshold),
      transfers_(allow_transfers && config.users > 1),
      p_min_(p_min),
      log_min_(std::log(p_min)),
      log_max_(std::log(config.p_max)),
      budget_(period_budget(config)) {
  const Index m = config.users;
  relay_count_ = static_cast<Index>(config.relays) * config.periods;
  size_ = relay_count_ + (transfers_ ? m * (m - 1) * config.periods : 0);
  scale_ = static_cast<double>(m * config.periods) * config.rate * config.slot;
}

Index DepletedProgram::transfer_index(int from, int to, int k) const {
  if (!transfers_ || from == to) return -1;
  const int m = config_.users;
  return relay_count_ + static_cast<Index>(k) * m * (m - 1) + from * (m - 1) +
         (to < from ? to : to - 1);
}

Index DepletedProgram::hard_count() const {
  return 2 * relay_count_ + 2 * static_cast<Index>(config_.users) * config_.periods +
         (size_ - relay_count_);
}

Index DepletedProgram::soft_count() const {
  return static_cast<Index>(config_.periods) * outage_.constraints_per_period();
}

VectorXd DepletedProgram::user_powers(const VectorXd& z, int k) const {
  VectorXd p = budget_.col(k);
  for (int i = 0; i < config_.users && transfers_; ++i)
    for (int o = 0; o < config_.users; ++o)
      if (o != i) p(i) += config_.eta * z(transfer_index(o, i, k)) - z(transfer_index(i, o, k));
  return p / config_.slot;
}

MatrixXd DepletedProgram::user_jacobian(int k) const {
  MatrixXd j = MatrixXd::Zero(config_.users, size_);
  for (int i = 0; i < config_.users && transfers_; ++i)
    for (int o = 0; o < config_.users; ++o)
      if (o != i) {
        j(i, transfer_index(o, i, k)) += config_.eta / config_.slot;
        j(i, transfer_index(i, o, k)) -= 1.0 / config_.slot;
      }
  return j;
}

void DepletedProgram::chain_period(const VectorXd& z, int k, const VectorXd& gy, const MatrixXd& hy,
                                   double weight, VectorXd& gradient, MatrixXd& hessian) const {
  const Index m = config_.users, n = config_.relays;
  const VectorXd p = user_powers(z, k);
  // Derivatives with respect to (p_u, log p_r).
  VectorXd g(m + n);
  g.head(m) = gy.head(m).cwiseQuotient(p);
  g.tail(n) = gy.tail(n);
  MatrixXd h = hy;
  h.topLeftCorner(m, m).diagonal() -= gy.head(m);
  const VectorXd inv = p.cwiseInverse();
  h.topRows(m) = inv.asDiagonal() * h.topRows(m);
  h.leftCols(m) = h.leftCols(m) * inv.asDiagonal();

  MatrixXd j = MatrixXd::Zero(m + n, size_);
  j.topRows(m) = user_jacobian(k);
  for (int r = 0; r < n; ++r) j(m + r, relay_index(r, k)) = 1.0;
  gradient.noalias() += weight * j.transpose() * g;
  hessian.noalias() += weight * j.transpose() * h * j;
}

double DepletedProgram::lost_bits(const VectorXd& z) const {
  double lost = 0.0;
  VectorXd y(config_.users + config_.relays);
  for (int k = 0; k < config_.periods; ++k) {
    y.head(config_.users) = user_powers(z, k).array().log();
    y.tail(config_.relays) = z.segment(relay_index(0, k), config_.relays);
    lost += outage_.lost(y, nullptr, nullptr);
  }
  return config_.rate * config_.slot * lost;
}

double DepletedProgram::energy(const VectorXd& z) const {
  // Users spend their whole budget; transfer losses are already inside it.
  return budget_.sum() + outage_.model().relay_slots * config_.slot *
                             z.head(relay_count_).array().exp().sum();
}

void DepletedProgram::objective_derivatives(const VectorXd& z, VectorXd& gradient,
                                            MatrixXd& hessian) const {
  gradient = VectorXd::Zero(size_);
  hessian = MatrixXd::Zero(size_, size_);
  const double lost_weight = config_.rate * config_.slot / scale_;
  VectorXd y(config_.users + config_.relays), gy;
  MatrixXd hy;
  for (int k = 0; k < config_.periods; ++k) {
    y.head(config_.users) = user_powers(z, k).array().log();
    y.tail(config_.relays) = z.segment(relay_index(0, k), config_.relays);
    outage_.lost(y, &gy, &hy);
    chain_period(z, k, gy, hy, lost_weight, gradient, hessian);
  }
  const double w = q_ * outage_.model().relay_slots * config_.slot / scale_;
  for (Index v = 0; v < relay_count_; ++v) {
    const double e = w * std::exp(z(v));
    gradient(v) += e;
    hessian(v, v) += e;
  }
}

// Hard rows: relay box (2 per relay variable), user power box (2 per user and
// period, scaled by 1/p_max), then transfer signs.
void DepletedProgram::hard_values(const VectorXd& z, VectorXd& values) const {
  values.resize(hard_count());
  for (Index v = 0; v < relay_count_; ++v) {
    values(2 * v) = z(v) - log_max_;
    values(2 * v + 1) = log_min_ - z(v);
  }
  Index row = 2 * relay_count_;
  for (int k = 0; k < config_.periods; ++k) {
    const VectorXd p = user_powers(z, k);
    for (int i = 0; i < config_.users; ++i) {
      values(row++) = (p(i) - config_.p_max) / config_.p_max;
      values(row++) = (p_min_ - p(i)) / config_.p_max;
    }
  }
  for (Index e = relay_count_; e < size_; ++e) values(row++) = -z(e);
}

void DepletedProgram::hard_derivatives(const VectorXd&, const VectorXd&, MatrixXd& jacobian,
                                       MatrixXd& weighted_hessian) const {
  jacobian = MatrixXd::Zero(hard_count(), size_);
  for (Index v = 0; v < relay_count_; ++v) {
    jacobian(2 * v, v) = 1.0;
    jacobian(2 * v + 1, v) = -1.0;
  }
  Index row = 2 * relay_count_;
  for (int k = 0; k < config_.periods; ++k) {
    const MatrixXd j = user_jacobian(k) / config_.p_max;
    for (int i = 0; i < config_.users; ++i) {
      jacobian.row(row++) = j.row(i);
      jacobian.row(row++) = -j.row(i);
    }
  }
  for (Index e = relay_count_; e < size_; ++e) jacobian(row++, e) = -1.0;
  weighted_hessian = MatrixXd::Zero(size_, size_);
}

void DepletedProgram::soft_values(const VectorXd& z, VectorXd& values) const {
  values.resize(soft_count());
  const int per = outage_.constraints_per_period();
  VectorXd y(config_.users + config_.relays);
  for (int k = 0; k < config_.periods; ++k) {
    y.head(config_.users) = user_powers(z, k).array().log();
    y.tail(config_.relays) = z.segment(relay_index(0, k), config_.relays);
    for (int c = 0; c < per; ++c) values(k * per + c) = outage_.log_constraint(c, y, nullptr, nullptr);
  }
}

void DepletedProgram::soft_derivatives(const VectorXd& z, const VectorXd& weights,
                                       MatrixXd& jacobian, MatrixXd& weighted_hessian) const {
  jacobian = MatrixXd::Zero(soft_count(), size_);
  weighted_hessian = MatrixXd::Zero(size_, size_);
  const int per = outage_.constraints_per_period();
  VectorXd y(config_.users + config_.relays), gy, row_gradient(size_);
  MatrixXd hy;
  for (int k = 0; k < config_.periods; ++k) {
    y.head(config_.users) = user_powers(z, k).array().log();
    y.tail(config_.relays) = z.segment(relay_index(0, k), config_.relays);
    for (int c = 0; c < per; ++c) {
      const Index row = k * per + c;
      outage_.log_constraint(c, y, &gy, &hy);
      row_gradient.setZero();
      chain_period(z, k, gy, hy, weights(row), row_gradient, weighted_hessian);
      jacobian.row(row) = row_gradient.transpose() / weights(row);
    }
  }
}

Policy DepletedProgram::to_policy(const VectorXd& z) const {
  Policy policy = Policy::zeros(config_);
  for (int k = 0; k < config_.periods; ++k) {
    policy.p_u.col(k) = user_powers(z, k);
    for (int j = 0; j < config_.relays; ++j) policy.p_r(j, k) = std::exp(z(relay_index(j, k)));
    if (!transfers_) continue;
    for (int i = 0; i < config_.users; ++i)
      for (int o = 0; o < config_.users; ++o)
        if (o != i) policy.transfers[static_cast<std::size_t>(k)](i, o) = z(transfer_index(i, o, k));
  }
  return policy;
}

VectorXd DepletedProgram::start_point() const {
  const double centre = 0.5 * (log_min_ + log_max_);
  VectorXd z(size_);
  z.head(relay_count_).setConstant(
      clamp_log(0.9 * std::log(config_.p_max / 10.0) + 0.1 * centre, log_min_, log_max_));
  const double mean_budget = budget_.mean();
  const double seed = 1e-6 * (mean_budget > 0.0 ? mean_budget : config_.p_max * config_.slot);
  if (size_ > relay_count_) z.tail(size_ - relay_count_).setConstant(seed);
  return z;
}

ConstraintClass DepletedProgram::hard_class(Index c) const {
  const Index boxes = 2 * relay_count_ + 2 * static_cast<Index>(config_.users) * config_.periods;
  return c < boxes ? ConstraintClass::power_bounds : ConstraintClass::transfers;
}

}  // namespace coopee::detail

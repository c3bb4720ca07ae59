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

#ifndef COOPEE_PROGRAMS_HPP
#define COOPEE_PROGRAMS_HPP

#include <vector>

#include <Eigen/Dense>

#include "coopee/barrier.hpp"
#include "coopee/model.hpp"
#include "coopee/posynomial.hpp"
#include "coopee/scenario.hpp"

namespace coopee::detail {

/// Subtractive EE problem  min (a0 T sum_k lost_k + q E_tot) / S  in log-power variables.
/// S = M K a0 T keeps the objective O(1) across scenarios.
class EeProgram : public barrier::ConvexProgram {
 public:
  void set_q(double q) { q_ = q; }
  double q() const { return q_; }
  double scale() const { return scale_; }

  /// a0 T sum_k lost_k under the approximate outage (bits lost in expectation).
  virtual double lost_bits(const Eigen::VectorXd& z) const = 0;
  /// Total consumed energy (J).
  virtual double energy(const Eigen::VectorXd& z) const = 0;
  virtual Policy to_policy(const Eigen::VectorXd& z) const = 0;
  /// Interior-ish point used to seed phase 1; satisfies the hard constraints strictly.
  virtual Eigen::VectorXd start_point() const = 0;
  virtual ConstraintClass hard_class(Eigen::Index c) const = 0;
  virtual ConstraintClass soft_class(Eigen::Index c) const = 0;

  double objective(const Eigen::VectorXd& z) const override {
    return (lost_bits(z) + q_ * energy(z)) / scale_;
  }

 protected:
  double q_ = 0.0;
  double scale_ = 1.0;
};

/// Per-period outage posynomials shared by both programs.
class PeriodOutage {
 public:
  PeriodOutage(const OutageModel& model, double threshold);

  int constraints_per_period() const { return static_cast<int>(model_->constraints.size()); }
  /// log f_c(y) - log threshold, with gradient and Hessian in y.
  double log_constraint(int c, const Eigen::VectorXd& y, Eigen::VectorXd* gradient,
                        Eigen::MatrixXd* hessian) const;
  double lost(const Eigen::VectorXd& y, Eigen::VectorXd* gradient, Eigen::MatrixXd* hessian) const;
  const OutageModel& model() const { return *model_; }

 private:
  const OutageModel* model_;
  double log_threshold_;
};

/// Full problem over (log p_u, log p_r, transfers) with cumulative causality.
class MainProgram final : public EeProgram {
 public:
  MainProgram(const ScenarioConfig& config, const OutageModel& model, bool allow_transfers,
              double threshold, double p_min);

  Eigen::Index dimension() const override { return size_; }
  Eigen::Index hard_count() const override;
  Eigen::Index soft_count() const override;

  void objective_derivatives(const Eigen::VectorXd& z, Eigen::VectorXd& gradient,
                             Eigen::MatrixXd& hessian) const override;
  void hard_values(const Eigen::VectorXd& z, Eigen::VectorXd& values) const override;
  void hard_derivatives(const Eigen::VectorXd& z, const Eigen::VectorXd& weights,
                        Eigen::MatrixXd& jacobian, Eigen::MatrixXd& weighted_hessian) const override;
  void soft_values(const Eigen::VectorXd& z, Eigen::VectorXd& values) const override;
  void soft_derivatives(const Eigen::VectorXd& z, const Eigen::VectorXd& weights,
                        Eigen::MatrixXd& jacobian, Eigen::MatrixXd& weighted_hessian) const override;

  double lost_bits(const Eigen::VectorXd& z) const override;
  double energy(const Eigen::VectorXd& z) const override;
  Policy to_policy(const Eigen::VectorXd& z) const override;
  Eigen::VectorXd from_policy(const Policy& policy) const;
  Eigen::VectorXd start_point() const override;
  ConstraintClass hard_class(Eigen::Index c) const override;
  ConstraintClass soft_class(Eigen::Index c) const override;

  Eigen::Index user_index(int i, int k) const { return k * config_.users + i; }
  Eigen::Index relay_index(int j, int k) const { return powers_u_ + k * config_.relays + j; }
  /// Index of E_{from->to,k}; -1 when transfers are disabled or from == to.
  Eigen::Index transfer_index(int from, int to, int k) const;
  bool transfers_enabled() const { return transfers_; }

 private:
  Eigen::VectorXd period_y(const Eigen::VectorXd& z, int k) const;
  void scatter_period(int k, const Eigen::VectorXd& gy, const Eigen::MatrixXd& hy, double weight,
                      Eigen::VectorXd& gradient, Eigen::MatrixXd& hessian) const;
  double transfer_sum(const Eigen::VectorXd& z) const;

  const ScenarioConfig& config_;
  PeriodOutage outage_;
  bool transfers_;
  double log_min_, log_max_;
  double energy_scale_;
  Eigen::Index powers_u_, powers_r_, transfer_count_, size_;
  Eigen::MatrixXd cumulative_arrivals_;  // M x K, includes initial storage
};

/// Depleted-energy problem: user power is fixed by the period's budget,
/// p_ik = (A_ik + eta in_ik - out_ik) / T; variables are (log p_r, within-period transfers).
class DepletedProgram final : public EeProgram {
 public:
  DepletedProgram(const ScenarioConfig& config, const OutageModel& model, bool allow_transfers,
                  double threshold, double p_min);

  Eigen::Index dimension() const override { return size_; }
  Eigen::Index hard_count() const override;
  Eigen::Index soft_count() const override;

  void objective_derivatives(const Eigen::VectorXd& z, Eigen::VectorXd& gradient,
                             Eigen::MatrixXd& hessian) const override;
  void hard_values(const Eigen::VectorXd& z, Eigen::VectorXd& values) const override;
  void hard_derivatives(const Eigen::VectorXd& z, const Eigen::VectorXd& weights,
                        Eigen::MatrixXd& jacobian, Eigen::MatrixXd& weighted_hessian) const override;
  void soft_values(const Eigen::VectorXd& z, Eigen::VectorXd& values) const override;
  void soft_derivatives(const Eigen::VectorXd& z, const Eigen::VectorXd& weights,
                        Eigen::MatrixXd& jacobian, Eigen::MatrixXd& weighted_hessian) const override;

  double lost_bits(const Eigen::VectorXd& z) const override;
  double energy(const Eigen::VectorXd& z) const override;
  Policy to_policy(const Eigen::VectorXd& z) const override;
  Eigen::VectorXd start_point() const override;
  ConstraintClass hard_class(Eigen::Index c) const override;
  ConstraintClass soft_class(Eigen::Index) const override { return ConstraintClass::outage; }

 private:
  Eigen::Index relay_index(int j, int k) const { return k * config_.relays + j; }
  Eigen::Index transfer_index(int from, int to, int k) const;
  /// User powers of period k and d p_i / d z as a sparse list per user.
  Eigen::VectorXd user_powers(const Eigen::VectorXd& z, int k) const;
  /// Maps y-space derivatives (log p_u, log p_r) of period k to z-space.
  void chain_period(const Eigen::VectorXd& z, int k, const Eigen::VectorXd& gy,
                    const Eigen::MatrixXd& hy, double weight, Eigen::VectorXd& gradient,
                    Eigen::MatrixXd& hessian) const;
  Eigen::MatrixXd user_jacobian(int k) const;  // M x size, d p_u / d z

  const ScenarioConfig& config_;
  PeriodOutage outage_;
  bool transfers_;
  double p_min_;
  double log_min_, log_max_;
  Eigen::Index relay_count_, size_;
  Eigen::MatrixXd budget_;  // M x K, energy released in each period
};

}  // namespace coopee::detail

#endif  // COOPEE_PROGRAMS_HPP

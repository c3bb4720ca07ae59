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

#ifndef COOPEE_POSYNOMIAL_HPP
#define COOPEE_POSYNOMIAL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "coopee/model.hpp"

namespace coopee {

/// Sum-exponential form of a posynomial in negative powers:
///
///   f(y) = sum_t a_t exp(-m <e_t, y>),   a_t > 0, e_t in N^V,
///
/// where y are log-powers (users first, then relays) of a single period.
/// Coefficients are kept as logarithms so products of tiny link constants
/// do not underflow.
class Posynomial {
 public:
  Posynomial() = default;
  Posynomial(int variables, double m);
  /// Builds from already-merged terms (one exponent row per coefficient).
  static Posynomial from_terms(double m, Eigen::VectorXd log_coefficients, Eigen::MatrixXd exponents);

  /// Adds exp(log_coefficient) * exp(-m <counts, y>), merging equal exponents.
  void add_term(double log_coefficient, std::span<const std::uint8_t> counts);

  /// Returns a copy with every coefficient multiplied by `weight` > 0.
  Posynomial scaled(double weight) const;
  /// Term-wise sum of two posynomials over the same variables.
  Posynomial plus(const Posynomial& other) const;

  int variables() const { return variables_; }
  Eigen::Index terms() const { return log_coefficients_.size(); }
  double m() const { return m_; }
  const Eigen::VectorXd& log_coefficients() const { return log_coefficients_; }
  /// Exponent counts, one row per term.
  const Eigen::MatrixXd& exponents() const { return exponents_; }

  double value(const Eigen::VectorXd& y) const;
  /// Value, gradient and (optionally) dense Hessian with respect to y.
  double evaluate(const Eigen::VectorXd& y, Eigen::VectorXd& gradient,
                  Eigen::MatrixXd* hessian) const;
  Eigen::VectorXd hessian_times(const Eigen::VectorXd& y, const Eigen::VectorXd& v) const;

 private:
  Eigen::VectorXd term_values(const Eigen::VectorXd& y) const;

  int variables_ = 0;
  double m_ = 1.0;
  Eigen::VectorXd log_coefficients_;
  Eigen::MatrixXd exponents_;
};

/// Approximate network-coded outage (A + B) of one period as a posynomial in
/// y = (log p_u, log p_r). Throws std::length_error beyond `max_terms`.
Posynomial nc_outage_posynomial(const LinkCoefficients& coeffs, double m, int users,
                                std::size_t max_terms = 2'000'000);

/// Approximate NoNC per-user outages, one posynomial per user.
std::vector<Posynomial> nonc_outage_posynomials(const LinkCoefficients& coeffs, double m);

/// Outage structure handed to the optimizer.
struct OutageModel {
  Coding coding = Coding::network_coded;
  /// Each period must keep every constraint posynomial <= pr_out_0.
  std::vector<Posynomial> constraints;
  /// Expected number of lost user messages per period.
  Posynomial lost_messages;
  int relay_slots = 1;

  static OutageModel build(const ScenarioConfig& config, const LinkCoefficients& coeffs,
                           Coding coding);
};

/// Value, gradient and Hessian-vector product of the approximate outage at log-powers y.
struct OutageDerivatives {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::VectorXd hessian_vector;
};

OutageDerivatives outage_value_grad_hess(const Posynomial& outage, const Eigen::VectorXd& y,
                                         const Eigen::VectorXd& direction);

}  // namespace coopee

#endif  // COOPEE_POSYNOMIAL_HPP

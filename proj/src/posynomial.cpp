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

#include "coopee/posynomial.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "coopee/subsets.hpp"

namespace coopee {
namespace {

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -HUGE_VAL) return a;
  return a + std::log1p(std::exp(b - a));
}

/// Accumulates terms keyed by exponent vector before freezing into a Posynomial.
class TermCollector {
 public:
  TermCollector(int variables, std::size_t max_terms) : variables_(variables), max_terms_(max_terms) {}

  void add(double log_coefficient, const std::vector<std::uint8_t>& counts) {
    if (++expansions_ > max_terms_)
      throw std::length_error("posynomial expansion exceeds " + std::to_string(max_terms_) + " terms");
    auto [it, inserted] = terms_.try_emplace(counts, log_coefficient);
    if (!inserted) it->second = log_add(it->second, log_coefficient);
  }

  Posynomial freeze(double m) const {
    Eigen::VectorXd log_c(static_cast<Eigen::Index>(terms_.size()));
    Eigen::MatrixXd exponents(log_c.size(), variables_);
    Eigen::Index t = 0;
    for (const auto& [counts, value] : terms_) {
      log_c(t) = value;
      for (int v = 0; v < variables_; ++v) exponents(t, v) = counts[static_cast<std::size_t>(v)];
      ++t;
    }
    return Posynomial::from_terms(m, std::move(log_c), std::move(exponents));
  }

 private:
  int variables_;
  std::size_t max_terms_;
  std::size_t expansions_ = 0;
  std::map<std::vector<std::uint8_t>, double> terms_;
};

}  // namespace

Posynomial::Posynomial(int variables, double m)
    : variables_(variables), m_(m), exponents_(0, variables) {}

Posynomial Posynomial::from_terms(double m, Eigen::VectorXd log_coefficients,
                                  Eigen::MatrixXd exponents) {
  if (log_coefficients.size() != exponents.rows())
    throw std::invalid_argument("posynomial needs one exponent row per coefficient");
  Posynomial p(static_cast<int>(exponents.cols()), m);
  p.log_coefficients_ = std::move(log_coefficients);
  p.exponents_ = std::move(exponents);
  return p;
}

void Posynomial::add_term(double log_coefficient, std::span<const std::uint8_t> counts) {
  if (static_cast<int>(counts.size()) != variables_)
    throw std::invalid_argument("posynomial term has the wrong number of exponents");
  if (!std::isfinite(log_coefficient))
    throw std::invalid_argument("posynomial coefficients must be finite and positive");
  for (Eigen::Index t = 0; t < terms(); ++t) {
    bool same = true;
    for (int v = 0; v < variables_ && same; ++v) same = exponents_(t, v) == counts[static_cast<std::size_t>(v)];
    if (same) {
      log_coefficients_(t) = log_add(log_coefficients_(t), log_coefficient);
      return;
    }
  }
  const Eigen::Index t = terms();
  log_coefficients_.conservativeResize(t + 1);
  exponents_.conservativeResize(t + 1, variables_);
  log_coefficients_(t) = log_coefficient;
  for (int v = 0; v < variables_; ++v) exponents_(t, v) = counts[static_cast<std::size_t>(v)];
}

Posynomial Posynomial::scaled(double weight) const {
  if (!(weight > 0.0)) throw std::invalid_argument("posynomial weight must be positive");
  Posynomial out = *this;
  out.log_coefficients_.array() += std::log(weight);
  return out;
}

Posynomial Posynomial::plus(const Posynomial& other) const {
  if (other.variables_ != variables_ || other.m_ != m_)
    throw std::invalid_argument("cannot add posynomials over different variables");
  TermCollector collector(variables_, static_cast<std::size_t>(terms() + other.terms()) + 1);
  std::vector<std::uint8_t> counts(static_cast<std::size_t>(variables_));
  for (const Posynomial* p : {this, &other}) {
    for (Eigen::Index t = 0; t < p->terms(); ++t) {
      for (int v = 0; v < variables_; ++v)
        counts[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(p->exponents_(t, v));
      collector.add(p->log_coefficients_(t), counts);
    }
  }
  return collector.freeze(m_);
}

Eigen::VectorXd Posynomial::term_values(const Eigen::VectorXd& y) const {
  return (log_coefficients_ - m_ * (exponents_ * y)).array().exp().matrix();
}

double Posynomial::value(const Eigen::VectorXd& y) const { return term_values(y).sum(); }

double Posynomial::evaluate(const Eigen::VectorXd& y, Eigen::VectorXd& gradient,
                            Eigen::MatrixXd* hessian) const {
  const Eigen::VectorXd w = term_values(y);
  gradient = -m_ * (exponents_.transpose() * w);
  if (hessian) *hessian = (m_ * m_) * (exponents_.transpose() * w.asDiagonal() * exponents_);
  return w.sum();
}

Eigen::VectorXd Posynomial::hessian_times(const Eigen::VectorXd& y, const Eigen::VectorXd& v) const {
  const Eigen::VectorXd w = term_values(y);
  const Eigen::VectorXd projected = exponents_ * v;
  return (m_ * m_) * (exponents_.transpose() * w.cwiseProduct(projected));
}

Posynomial nc_outage_posynomial(const LinkCoefficients& coeffs, double m, int users,
                                std::size_t max_terms) {
  const auto relays = static_cast<int>(coeffs.relays.size());
  const int variables = users + relays;
  const SubsetTables& tables = SubsetTables::shared(users, relays);
  TermCollector collector(variables, max_terms);

  Eigen::MatrixXd log_cu = coeffs.users.array().log().matrix();
  Eigen::VectorXd log_cr = coeffs.relays.array().log().matrix();
  std::vector<std::uint8_t> counts(static_cast<std::size_t>(variables), 0);

  // Expands prod_{j not in phi} sum_i c_ij u_i, then multiplies by `tail`.
  auto expand_missing = [&](std::uint32_t phi, auto&& tail) {
    std::vector<int> missing;
    for (int j = 0; j < relays; ++j)
      if (!(phi >> j & 1u)) missing.push_back(j);
    auto recurse = [&](auto&& self, std::size_t pos, double log_c) -> void {
      if (pos == missing.size()) {
        tail(log_c);
        return;
      }
      const int j = missing[pos];
      for (int i = 0; i < users; ++i) {
        ++counts[static_cast<std::size_t>(i)];
        self(self, pos + 1, log_c + log_cu(i, j));
        --counts[static_cast<std::size_t>(i)];
      }
    };
    recurse(recurse, 0, 0.0);
  };

  for (int n = 0; n < users; ++n)
    for (std::uint32_t phi : tables.subsets_of_size(n))
      expand_missing(phi, [&](double log_c) { collector.add(log_c, counts); });

  for (int n = users; n <= relays; ++n) {
    for (std::uint32_t phi : tables.subsets_of_size(n)) {
      expand_missing(phi, [&](double log_c) {
        tables.for_each_small_subset(phi, [&](std::uint32_t psi) {
          double log_term = log_c;
          for (int j = 0; j < relays; ++j) {
            if ((phi >> j & 1u) && !(psi >> j & 1u)) {
              ++counts[static_cast<std::size_t>(users + j)];
              log_term += log_cr(j);
            }
          }
          collector.add(log_term, counts);
          for (int j = 0; j < relays; ++j)
            if ((phi >> j & 1u) && !(psi >> j & 1u)) --counts[static_cast<std::size_t>(users + j)];
        });
      });
    }
  }
  return collector.freeze(m);
}

std::vector<Posynomial> nonc_outage_posynomials(const LinkCoefficients& coeffs, double m) {
  const auto users = static_cast<int>(coeffs.users.rows());
  const auto relays = static_cast<int>(coeffs.relays.size());
  const int variables = users + relays;
  if (relays > SubsetTables::kMaxRelays) throw std::invalid_argument("too many relays");
  std::vector<Posynomial> out;
  for (int i = 0; i < users; ++i) {
    TermCollector collector(variables, std::size_t{1} << relays);
    for (std::uint32_t via_relay = 0; via_relay < (1u << relays); ++via_relay) {
      std::vector<std::uint8_t> counts(static_cast<std::size_t>(variables), 0);
      double log_c = 0.0;
      for (int j = 0; j < relays; ++j) {
        if (via_relay >> j & 1u) {
          counts[static_cast<std::size_t>(users + j)] = 1;
          log_c += std::log(coeffs.relays(j));
        } else {
          ++counts[static_cast<std::size_t>(i)];
          log_c += std::log(coeffs.users(i, j));
        }
      }
      collector.add(log_c, counts);
    }
    out.push_back(collector.freeze(m));
  }
  return out;
}

OutageModel OutageModel::build(const ScenarioConfig& config, const LinkCoefficients& coeffs,
                               Coding coding) {
  OutageModel model;
  model.coding = coding;
  model.relay_slots = coopee::relay_slots(config, coding);
  if (coding == Coding::network_coded) {
    Posynomial pout = nc_outage_posynomial(coeffs, config.fading_m, config.users);
    model.lost_messages = pout.scaled(config.users);
    model.constraints.push_back(std::move(pout));
  } else {
    model.constraints = nonc_outage_posynomials(coeffs, config.fading_m);
    model.lost_messages = model.constraints.front();
    for (std::size_t i = 1; i < model.constraints.size(); ++i)
      model.lost_messages = model.lost_messages.plus(model.constraints[i]);
  }
  return model;
}

OutageDerivatives outage_value_grad_hess(const Posynomial& outage, const Eigen::VectorXd& y,
                                         const Eigen::VectorXd& direction) {
  OutageDerivatives out;
  out.value = outage.evaluate(y, out.gradient, nullptr);
  out.hessian_vector = outage.hessian_times(y, direction);
  return out;
}

}  // namespace coopee

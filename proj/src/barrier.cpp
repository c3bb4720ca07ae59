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

#include "coopee/barrier.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace coopee::barrier {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Barrier function phi_t(z) = t f(z) - sum log(-c(z)) over hard and soft constraints.
class BarrierFunction {
 public:
  explicit BarrierFunction(const ConvexProgram& program) : program_(program) {}

  Index constraint_count() const { return program_.hard_count() + program_.soft_count(); }

  double value(const VectorXd& z, double t) const {
    double sum = 0.0;
    if (!accumulate_log(z, sum)) return kInf;
    const double f = program_.objective(z);
    if (!std::isfinite(f)) return kInf;
    return t * f - sum;
  }

  void derivatives(const VectorXd& z, double t, VectorXd& gradient, MatrixXd& hessian) const {
    program_.objective_derivatives(z, gradient, hessian);
    gradient *= t;
    hessian *= t;
    add_constraints(z, /*hard=*/true, gradient, hessian);
    add_constraints(z, /*hard=*/false, gradient, hessian);
  }

 private:
  bool accumulate_log(const VectorXd& z, double& sum) const {
    VectorXd values;
    for (bool hard : {true, false}) {
      if (hard) {
        if (program_.hard_count() == 0) continue;
        program_.hard_values(z, values);
      } else {
        if (program_.soft_count() == 0) continue;
        program_.soft_values(z, values);
      }
      for (Index c = 0; c < values.size(); ++c) {
        if (!(values(c) < 0.0)) return false;
        sum += std::log(-values(c));
      }
      // Soft constraints may only be evaluated where hard ones hold.
    }
    return true;
  }

  void add_constraints(const VectorXd& z, bool hard, VectorXd& gradient, MatrixXd& hessian) const {
    const Index count = hard ? program_.hard_count() : program_.soft_count();
    if (count == 0) return;
    VectorXd values;
    if (hard) program_.hard_values(z, values); else program_.soft_values(z, values);
    const VectorXd inverse = (-values).cwiseInverse();
    MatrixXd jacobian;
    MatrixXd weighted;
    if (hard) program_.hard_derivatives(z, inverse, jacobian, weighted);
    else program_.soft_derivatives(z, inverse, jacobian, weighted);
    gradient.noalias() += jacobian.transpose() * inverse;
    hessian.noalias() += jacobian.transpose() * inverse.cwiseAbs2().asDiagonal() * jacobian;
    hessian += weighted;
  }

  const ConvexProgram& program_;
};

/// Solves H d = -g, regularizing until H is numerically positive definite.
bool newton_direction(const MatrixXd& hessian, const VectorXd& gradient, VectorXd& direction) {
  const double scale = std::max(1.0, hessian.diagonal().cwiseAbs().maxCoeff());
  double shift = 0.0;
  for (int attempt = 0; attempt < 14; ++attempt) {
    MatrixXd shifted = hessian;
    shifted.diagonal().array() += shift;
    Eigen::LDLT<MatrixXd> ldlt(shifted);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      direction = ldlt.solve(-gradient);
      if (direction.allFinite() && (gradient.dot(direction) < 0.0 || gradient.squaredNorm() == 0.0)) {
        return true;
      }
    }
    shift = shift == 0.0 ? 1e-12 * scale : shift * 10.0;
  }
  return false;
}

using StopRule = std::function<bool(const VectorXd& z, double t, double gap)>;

Result follow_path(const ConvexProgram& program, const VectorXd& start, const Options& options,
                   const StopRule& stop) {
  const BarrierFunction phi(program);
  const double constraints = static_cast<double>(std::max<Index>(phi.constraint_count(), 1));

  Result result;
  result.z = start;
  result.t = options.t0;
  if (!std::isfinite(phi.value(start, result.t))) {
    result.status = Status::numerical_failure;
    return result;
  }

  VectorXd gradient;
  MatrixXd hessian;
  VectorXd direction;
  for (int outer = 0; outer < options.max_outer; ++outer) {
    const double t = result.t;
    double current = phi.value(result.z, t);
    for (int it = 0; it < options.max_newton; ++it) {
      phi.derivatives(result.z, t, gradient, hessian);
      if (!newton_direction(hessian, gradient, direction)) {
        result.status = Status::numerical_failure;
        break;
      }
      const double slope = gradient.dot(direction);
      const double decrement = -slope;
      if (decrement / 2.0 <= options.newton_tolerance) break;
      ++result.newton_iterations;

      double step = 1.0;
      VectorXd trial;
      double next = kInf;
      const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(current);
      while (step > 1e-14) {
        trial = result.z + step * direction;
        next = phi.value(trial, t);
        if (std::isfinite(next) && next <= current + 0.25 * step * slope + slack) break;
        step *= 0.5;
      }
      if (!(step > 1e-14)) break;  // no further progress at this precision
      result.z = trial;
      current = next;
    }
    if (result.status == Status::numerical_failure) break;

    result.gap = constraints / t;
    if (stop && stop(result.z, t, result.gap)) break;
    if (result.gap <= options.gap_tolerance) break;
    if (outer + 1 == options.max_outer) {
      result.status = Status::max_iterations;
      break;
    }
    result.t = t * options.mu;
  }
  result.objective = program.objective(result.z);
  return result;
}

/// Stage A of phase 1: min s  s.t.  h_c(z) <= s,  s >= floor.
class RelaxedHard : public ConvexProgram {
 public:
  RelaxedHard(const ConvexProgram& base, double floor) : base_(base), floor_(floor) {}

  Index dimension() const override { return base_.dimension() + 1; }
  Index hard_count() const override { return 0; }
  Index soft_count() const override { return base_.hard_count() + 1; }

  double objective(const VectorXd& z) const override { return z(z.size() - 1); }
  void objective_derivatives(const VectorXd& z, VectorXd& g, MatrixXd& h) const override {
    g = VectorXd::Zero(z.size());
    g(z.size() - 1) = 1.0;
    h = MatrixXd::Zero(z.size(), z.size());
  }
  void hard_values(const VectorXd&, VectorXd& v) const override { v.resize(0); }
  void hard_derivatives(const VectorXd& z, const VectorXd&, MatrixXd& j, MatrixXd& h) const override {
    j.resize(0, z.size());
    h = MatrixXd::Zero(z.size(), z.size());
  }
  void soft_values(const VectorXd& z, VectorXd& v) const override {
    const Index n = base_.dimension();
    VectorXd base_values;
    base_.hard_values(z.head(n), base_values);
    v.resize(base_values.size() + 1);
    v.head(base_values.size()) = base_values.array() - z(n);
    v(base_values.size()) = floor_ - z(n);
  }
  void soft_derivatives(const VectorXd& z, const VectorXd& w, MatrixXd& j, MatrixXd& h) const override {
    const Index n = base_.dimension();
    const Index m = base_.hard_count();
    MatrixXd base_j, base_h;
    base_.hard_derivatives(z.head(n), w.head(m), base_j, base_h);
    j = MatrixXd::Zero(m + 1, n + 1);
    j.topLeftCorner(m, n) = base_j;
    j.col(n).head(m).setConstant(-1.0);
    j(m, n) = -1.0;
    h = MatrixXd::Zero(n + 1, n + 1);
    h.topLeftCorner(n, n) = base_h;
  }

 private:
  const ConvexProgram& base_;
  double floor_;
};

/// Stage B of phase 1: min s  s.t.  h_c(z) <= 0,  g_c(z) <= s,  s >= floor.
class RelaxedSoft : public ConvexProgram {
 public:
  RelaxedSoft(const ConvexProgram& base, double floor) : base_(base), floor_(floor) {}

  Index dimension() const override { return base_.dimension() + 1; }
  Index hard_count() const override { return base_.hard_count(); }
  Index soft_count() const override { return base_.soft_count() + 1; }

  double objective(const VectorXd& z) const override { return z(z.size() - 1); }
  void objective_derivatives(const VectorXd& z, VectorXd& g, MatrixXd& h) const override {
    g = VectorXd::Zero(z.size());
    g(z.size() - 1) = 1.0;
    h = MatrixXd::Zero(z.size(), z.size());
  }
  void hard_values(const VectorXd& z, VectorXd& v) const override {
    base_.hard_values(z.head(base_.dimension()), v);
  }
  void hard_derivatives(const VectorXd& z, const VectorXd& w, MatrixXd& j, MatrixXd& h) const override {
    const Index n = base_.dimension();
    MatrixXd base_j, base_h;
    base_.hard_derivatives(z.head(n), w, base_j, base_h);
    j = MatrixXd::Zero(base_j.rows(), n + 1);
    j.leftCols(n) = base_j;
    h = MatrixXd::Zero(n + 1, n + 1);
    h.topLeftCorner(n, n) = base_h;
  }
  void soft_values(const VectorXd& z, VectorXd& v) const override {
    const Index n = base_.dimension();
    VectorXd base_values;
    base_.soft_values(z.head(n), base_values);
    v.resize(base_values.size() + 1);
    v.head(base_values.size()) = base_values.array() - z(n);
    v(base_values.size()) = floor_ - z(n);
  }
  void soft_derivatives(const VectorXd& z, const VectorXd& w, MatrixXd& j, MatrixXd& h) const override {
    const Index n = base_.dimension();
    const Index m = base_.soft_count();
    MatrixXd base_j, base_h;
    base_.soft_derivatives(z.head(n), w.head(m), base_j, base_h);
    j = MatrixXd::Zero(m + 1, n + 1);
    j.topLeftCorner(m, n) = base_j;
    j.col(n).head(m).setConstant(-1.0);
    j(m, n) = -1.0;
    h = MatrixXd::Zero(n + 1, n + 1);
    h.topLeftCorner(n, n) = base_h;
  }

 private:
  const ConvexProgram& base_;
  double floor_;
};

constexpr double kRelaxationFloor = -1.0;

/// Runs a relaxed program until a centred point with s < 0 appears or s* >= 0 is certified.
bool relax_until_feasible(const ConvexProgram& relaxed, VectorXd& z, double& s, const Options& options,
                          int& iterations) {
  const Index n = relaxed.dimension() - 1;
  bool feasible = false;
  bool certified_infeasible = false;
  Options opts = options;
  opts.gap_tolerance = std::min(options.gap_tolerance, 1e-9);
  const Result r = follow_path(relaxed, z, opts, [&](const VectorXd& point, double, double gap) {
    const double relaxation = point(n);
    if (relaxation < 0.0) {
      feasible = true;
      return true;
    }
    if (relaxation - gap > 0.0) {
      certified_infeasible = true;
      return true;
    }
    return false;
  });
  iterations += r.newton_iterations;
  z = r.z;
  s = r.z(n);
  (void)certified_infeasible;
  return feasible;
}

}  // namespace

Result minimize(const ConvexProgram& program, const VectorXd& start, const Options& options) {
  return follow_path(program, start, options, nullptr);
}

FeasibilityResult find_strictly_feasible(const ConvexProgram& program, const VectorXd& start,
                                         const Options& options) {
  FeasibilityResult out;
  const Index n = program.dimension();
  VectorXd z = start;

  VectorXd values;
  if (program.hard_count() > 0) {
    program.hard_values(z, values);
    if (values.size() > 0 && !(values.maxCoeff() < 0.0)) {
      const RelaxedHard relaxed(program, kRelaxationFloor);
      VectorXd extended(n + 1);
      extended.head(n) = z;
      extended(n) = std::max(values.maxCoeff(), kRelaxationFloor) + 1.0;
      double s = 0.0;
      if (!relax_until_feasible(relaxed, extended, s, options, out.newton_iterations)) {
        program.hard_values(extended.head(n), values);
        values.maxCoeff(&out.worst_constraint);
        out.hard_failure = true;
        out.relaxation = s;
        out.z = extended.head(n);
        return out;
      }
      z = extended.head(n);
    }
  }

  if (program.soft_count() > 0) {
    program.soft_values(z, values);
    if (!(values.allFinite() && values.maxCoeff() < 0.0)) {
      const RelaxedSoft relaxed(program, kRelaxationFloor);
      VectorXd extended(n + 1);
      extended.head(n) = z;
      const double worst = values.allFinite() ? values.maxCoeff() : 1e6;
      extended(n) = std::max(worst, kRelaxationFloor) + 1.0;
      double s = 0.0;
      const bool ok = relax_until_feasible(relaxed, extended, s, options, out.newton_iterations);
      z = extended.head(n);
      out.relaxation = s;
      if (!ok) {
        program.soft_values(z, values);
        values.maxCoeff(&out.worst_constraint);
        out.z = z;
        return out;
      }
    } else {
      out.relaxation = values.maxCoeff();
    }
  }
  out.feasible = true;
  out.z = z;
  return out;
}

}  // namespace coopee::barrier

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

#ifndef COOPEE_SPECIAL_HPP
#define COOPEE_SPECIAL_HPP

namespace coopee {

/// Complete gamma function.
double gamma_function(double a);

/// Regularized lower incomplete gamma P(a, x) = (1/Gamma(a)) * int_0^x t^(a-1) e^-t dt.
/// Returns 1 for x = +inf and 0 for x <= 0.
double regularized_lower_gamma(double a, double x);

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double value) {
    const double t = sum_ + value;
    if ((sum_ >= 0 ? sum_ : -sum_) >= (value >= 0 ? value : -value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double value) {
    add(value);
    return *this;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace coopee

#endif  // COOPEE_SPECIAL_HPP

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

#ifndef COOPEE_SUBSETS_HPP
#define COOPEE_SUBSETS_HPP

#include <bit>
#include <cstdint>
#include <vector>

namespace coopee {

/// Relay index subsets used by the network outage sums, as bitmasks over
/// {0..N-1}. Phi_n ranges over the n-subsets of all relays; psi_tau over the
/// tau-subsets (tau < M) of a given Phi_n. Immutable once built.
class SubsetTables {
 public:
  static constexpr int kMaxRelays = 20;

  SubsetTables(int users, int relays);

  /// Process-wide cached instance for (users, relays).
  static const SubsetTables& shared(int users, int relays);

  int users() const { return users_; }
  int relays() const { return relays_; }
  std::uint32_t all() const { return all_; }

  /// Phi_n: every n-subset of the relays, n = 0..N.
  const std::vector<std::uint32_t>& subsets_of_size(int n) const { return by_size_[n]; }

  /// Calls fn(psi) for every subset psi of `set` with |psi| < M.
  template <class Fn>
  void for_each_small_subset(std::uint32_t set, Fn&& fn) const {
    std::uint32_t sub = set;
    while (true) {
      if (std::popcount(sub) < users_) fn(sub);
      if (sub == 0) break;
      sub = (sub - 1) & set;
    }
  }

  /// Calls fn(psi) for every tau-subset psi of `set`.
  template <class Fn>
  void for_each_subset(std::uint32_t set, int tau, Fn&& fn) const {
    std::uint32_t sub = set;
    while (true) {
      if (std::popcount(sub) == tau) fn(sub);
      if (sub == 0) break;
      sub = (sub - 1) & set;
    }
  }

 private:
  int users_;
  int relays_;
  std::uint32_t all_;
  std::vector<std::vector<std::uint32_t>> by_size_;
};

}  // namespace coopee

#endif  // COOPEE_SUBSETS_HPP

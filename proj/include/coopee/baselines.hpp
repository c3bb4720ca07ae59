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

#ifndef COOPEE_BASELINES_HPP
#define COOPEE_BASELINES_HPP

#include <string>

#include "coopee/model.hpp"
#include "coopee/scenario.hpp"
#include "coopee/solver.hpp"

namespace coopee {

enum class BaselineKind { depleted_energy, no_transfer, uniform_power, nonc_df };

std::string to_string(BaselineKind kind);
/// Throws InvalidInput for unknown names.
BaselineKind baseline_from_string(const std::string& name);

/// Every user spends exactly its period budget. Within-period transfers are
/// allowed unless `allow_transfers` is false.
SolveResult depleted_energy_policy(const ScenarioConfig& config, const SolverOptions& options = {},
                                   bool allow_transfers = true);

/// Energy may be saved across periods but never moved between users.
SolveResult no_transfer_policy(const ScenarioConfig& config, const SolverOptions& options = {});

/// Decode-and-forward without network coding: user i's message is lost when
/// no relay both decodes it and forwards it; a relay spends M slots per period.
SolveResult nonc_df_policy(const ScenarioConfig& config, const SolverOptions& options = {});

/// A fixed policy scored under the exact outage, without the threshold constraint.
struct PolicyEvaluation {
  Policy policy;
  OutageReport outage;  // exact
  double ee_exact = 0.0;
  FeasibilityReport feasibility;  // causality, power bounds and transfers only
  bool feasible = false;
  /// Common user power (W); lowered below the mean arrival when losses make it unreachable.
  double uniform_power = 0.0;
  bool power_reduced = false;
  std::string message;
};

/// Constant user power min(p_max, mean arrival power), made causal by greedy
/// just-in-time transfers; relay powers are copied from `reference`.
PolicyEvaluation uniform_power_policy(const ScenarioConfig& config, const SolveResult& reference);

/// Minimal-loss transfers that make `p_u` causal, moving only what each
/// deficit needs in the period it appears. Returns false when impossible.
bool schedule_transfers(const ScenarioConfig& config, Policy& policy);

struct GridSpec {
  int points = 64;       // log-spaced values per dimension in [p_min, p_max]
  int refinements = 2;   // zoom passes around the incumbent
  int zoom_cells = 2;    // half-width of each zoom window, in cells of the previous grid
  double p_min = kMinPower;
};

/// Exhaustive search over user and relay power grids with exact outage and
/// exact EE, transfers by just-in-time scheduling. Supports M <= 2, M K <= 4
/// and M + N <= 4; throws InvalidInput otherwise.
SolveResult brute_force_optimize(const ScenarioConfig& config, const GridSpec& grid = {});

}  // namespace coopee

#endif  // COOPEE_BASELINES_HPP

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

#ifndef COOPEE_EXPERIMENT_HPP
#define COOPEE_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "coopee/model.hpp"
#include "coopee/solver.hpp"

namespace coopee {

enum class Command { optimize, simulate, validate, sweep, compare };

std::string to_string(Command command);

/// Process exit codes.
enum ExitCode : int { kExitOk = 0, kExitInvalidInput = 2, kExitInfeasible = 3, kExitSolverFailure = 4 };

enum class SweepAxis { pr_out_0, delta, eta, m };

std::string to_string(SweepAxis axis);

struct Sweep {
  SweepAxis axis = SweepAxis::pr_out_0;
  std::vector<double> values;
};

/// Parses "axis=v1,v2,...". Throws InvalidInput.
Sweep parse_sweep(const std::string& text);

struct ExperimentSpec {
  Command command = Command::optimize;
  std::string scenario_path;
  std::vector<std::string> overrides;  // dotted-path key=value, applied in order
  std::optional<Sweep> sweep;
  std::string output_path;             // empty or "-" writes to stdout
  std::string policy_path;             // simulate / validate input
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 1;
  OutageMode reporting = OutageMode::exact;
  unsigned workers = 0;                // sweep/compare pool size, 0 = hardware concurrency
  SolverOptions solver;
};

/// Sweep table row.
struct SweepRow {
  double value = 0.0;
  bool feasible = false;
  std::string status;
  std::string reason;
  double ee_exact = 0.0;
  double q_star = 0.0;
  double energy = 0.0;
  double transferred = 0.0;
  std::vector<double> outage;  // per period
};

/// One scheme at one threshold in a comparison table.
struct CompareRow {
  double pr_out_0 = 0.0;
  std::string scheme;
  std::string status;
  double ee_approx = 0.0;
  double ee_exact = 0.0;
  double max_outage_exact = 0.0;
};

/// Loads the scenario, applies overrides and validates.
ScenarioConfig prepare_scenario(const ExperimentSpec& spec);

std::vector<SweepRow> run_sweep(const ScenarioConfig& config, const Sweep& sweep,
                                const SolverOptions& options, OutageMode reporting, unsigned workers);
std::vector<CompareRow> run_compare(const ScenarioConfig& config, const std::vector<double>& thresholds,
                                    const SolverOptions& options, unsigned workers);

std::string sweep_csv(const Sweep& sweep, const std::vector<SweepRow>& rows, int periods);
std::string compare_csv(const std::vector<CompareRow>& rows);

/// Executes a command, writing artifacts to the output path and error
/// records to `err`. Returns one of the ExitCode values.
int run(const ExperimentSpec& spec, std::ostream& err);

}  // namespace coopee

#endif  // COOPEE_EXPERIMENT_HPP

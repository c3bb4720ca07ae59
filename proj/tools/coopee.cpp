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

// Command-line front end: optimize, simulate, validate, sweep, compare.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coopee/experiment.hpp"
#include "coopee/serialize.hpp"

namespace {

void add_common(CLI::App* sub, coopee::ExperimentSpec& spec) {
  sub->add_option("--scenario", spec.scenario_path, "Scenario JSON file")->required();
  sub->add_option("--out", spec.output_path, "Output file (default stdout)");
  sub->add_option("--set", spec.overrides, "Override key=value, applied in order")->take_all();
  sub->add_option("--workers", spec.workers, "Worker threads (0 = all cores)");
  sub->add_option("--max-outer", spec.solver.max_outer, "Dinkelbach iteration cap");
  sub->add_option("--q-tol", spec.solver.q_tol, "Dinkelbach stop tolerance on V(q)");
  auto* exact = sub->add_flag("--exact", "Report exact outage (default)");
  auto* approx = sub->add_flag_callback(
      "--approx", [&spec] { spec.reporting = coopee::OutageMode::approximate; },
      "Report the approximate outage");
  exact->excludes(approx);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coopee: energy-efficient network-coded relaying with energy transfer"};
  app.require_subcommand(1);
  coopee::ExperimentSpec spec;
  std::string sweep_text;

  auto* optimize = app.add_subcommand("optimize", "Solve for the EE-maximizing policy");
  add_common(optimize, spec);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo outage of a policy");
  add_common(simulate, spec);
  simulate->add_option("--policy", spec.policy_path, "Policy JSON (default: optimize first)");
  simulate->add_option("--trials", spec.trials, "Trials per period")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", spec.seed, "RNG seed");

  auto* validate = app.add_subcommand("validate", "Audit a policy against all constraints");
  add_common(validate, spec);
  validate->add_option("--policy", spec.policy_path, "Policy or result JSON")->required();

  auto* sweep = app.add_subcommand("sweep", "Re-optimize along one axis, CSV output");
  add_common(sweep, spec);
  sweep->add_option("--sweep", sweep_text, "axis=v1,v2,... (pr_out_0, delta, eta, m)")->required();

  auto* compare = app.add_subcommand("compare", "Optimized policy against the baselines, CSV output");
  add_common(compare, spec);
  compare->add_option("--sweep", sweep_text, "pr_out_0=v1,v2,...");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return coopee::kExitInvalidInput;
  }

  if (optimize->parsed()) spec.command = coopee::Command::optimize;
  if (simulate->parsed()) spec.command = coopee::Command::simulate;
  if (validate->parsed()) spec.command = coopee::Command::validate;
  if (sweep->parsed()) spec.command = coopee::Command::sweep;
  if (compare->parsed()) spec.command = coopee::Command::compare;

  if (!sweep_text.empty()) {
    try {
      spec.sweep = coopee::parse_sweep(sweep_text);
    } catch (const std::exception& e) {
      std::cerr << coopee::error_record(coopee::kExitInvalidInput, "invalid_input", e.what()).dump() << "\n";
      return coopee::kExitInvalidInput;
    }
  }
  return coopee::run(spec, std::cerr);
}

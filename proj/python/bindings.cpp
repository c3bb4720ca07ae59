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


// Python bindings. Scenarios and policies cross the boundary as JSON text;
// the coopee package wraps them in dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "coopee/baselines.hpp"
#include "coopee/experiment.hpp"
#include "coopee/montecarlo.hpp"
#include "coopee/outage.hpp"
#include "coopee/scenario.hpp"
#include "coopee/serialize.hpp"
#include "coopee/solver.hpp"
#include "coopee/special.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace coopee {
namespace {

ScenarioConfig scenario(const std::string& text) { return scenario_from_json(json::parse(text)); }

// Accepts either a bare policy or an optimize/baseline result that embeds one.
std::pair<Policy, Coding> policy(const std::string& text, const ScenarioConfig& c) {
  const json doc = json::parse(text);
  Coding coding = Coding::network_coded;
  if (doc.contains("coding") && doc.at("coding") == to_string(Coding::nonc_df)) coding = Coding::nonc_df;
  return {policy_from_json(doc.contains("policy") ? doc.at("policy") : doc, c), coding};
}

SolverOptions options(int max_outer, bool calibrate) {
  SolverOptions o;
  o.max_outer = max_outer;
  o.calibrate_threshold = calibrate;
  return o;
}

std::string optimize(const std::string& text, int max_outer, bool calibrate) {
  const ScenarioConfig c = scenario(text);
  py::gil_scoped_release release;
  return solve_result_to_json(c, dinkelbach_optimize(c, options(max_outer, calibrate))).dump();
}

std::string baseline(const std::string& text, const std::string& name, int max_outer) {
  const ScenarioConfig c = scenario(text);
  const SolverOptions o = options(max_outer, true);
  py::gil_scoped_release release;
  switch (baseline_from_string(name)) {
    case BaselineKind::depleted_energy: return solve_result_to_json(c, depleted_energy_policy(c, o)).dump();
    case BaselineKind::no_transfer: return solve_result_to_json(c, no_transfer_policy(c, o)).dump();
    case BaselineKind::nonc_df: return solve_result_to_json(c, nonc_df_policy(c, o)).dump();
    case BaselineKind::uniform_power: return evaluation_to_json(uniform_power_policy(c, dinkelbach_optimize(c, o))).dump();
  }
  throw InvalidInput("unknown baseline");
}

std::string outage(const std::string& scenario_text, const std::string& policy_text, bool exact) {
  const ScenarioConfig c = scenario(scenario_text);
  const auto [p, coding] = policy(policy_text, c);
  return outage_to_json(outage_report(c, p, exact ? OutageMode::exact : OutageMode::approximate, coding)).dump();
}

std::string check(const std::string& scenario_text, const std::string& policy_text) {
  const ScenarioConfig c = scenario(scenario_text);
  const auto [p, coding] = policy(policy_text, c);
  return feasibility_to_json(validate_policy(c, p, coding, true)).dump();
}

std::string simulate(const std::string& scenario_text, const std::string& policy_text, std::uint64_t trials,
                     std::uint64_t seed, unsigned threads) {
  const ScenarioConfig c = scenario(scenario_text);
  const Policy p = policy(policy_text, c).first;
  MonteCarloOptions o;
  o.trials = trials;
  o.seed = seed;
  o.threads = threads;
  py::gil_scoped_release release;
  return monte_carlo_to_json(estimate_outage(c, p, o)).dump();
}

std::string sweep(const std::string& text, const std::string& spec, unsigned workers, bool exact) {
  const ScenarioConfig c = scenario(text);
  const Sweep s = parse_sweep(spec);
  py::gil_scoped_release release;
  const auto rows = run_sweep(c, s, SolverOptions{}, exact ? OutageMode::exact : OutageMode::approximate, workers);
  return sweep_csv(s, rows, c.periods);
}

std::string compare(const std::string& text, const std::vector<double>& thresholds, unsigned workers) {
  const ScenarioConfig c = scenario(text);
  py::gil_scoped_release release;
  return compare_csv(run_compare(c, thresholds, SolverOptions{}, workers));
}

}  // namespace
}  // namespace coopee

PYBIND11_MODULE(_core, m) {
  using namespace coopee;
  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);

  m.def("load_scenario", [](const std::string& path) { return scenario_to_json(load_scenario(path)).dump(); },
        py::arg("path"));
  m.def("normalize_scenario", [](const std::string& text) { return scenario_to_json(scenario(text)).dump(); },
        py::arg("scenario"));
  m.def("optimize", &optimize, py::arg("scenario"), py::arg("max_outer") = 50, py::arg("calibrate") = true);
  m.def("baseline", &baseline, py::arg("scenario"), py::arg("name"), py::arg("max_outer") = 50);
  m.def("outage", &outage, py::arg("scenario"), py::arg("policy"), py::arg("exact") = true);
  m.def("validate", &check, py::arg("scenario"), py::arg("policy"));
  m.def("simulate", &simulate, py::arg("scenario"), py::arg("policy"), py::arg("trials") = 100000,
        py::arg("seed") = 1, py::arg("threads") = 0);
  m.def("sweep", &sweep, py::arg("scenario"), py::arg("sweep"), py::arg("workers") = 0, py::arg("exact") = true);
  m.def("compare", &compare, py::arg("scenario"), py::arg("thresholds"), py::arg("workers") = 0);
  m.def("regularized_lower_gamma", &regularized_lower_gamma, py::arg("a"), py::arg("x"));
}

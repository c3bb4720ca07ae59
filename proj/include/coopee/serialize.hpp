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

#ifndef COOPEE_SERIALIZE_HPP
#define COOPEE_SERIALIZE_HPP

#include <string>

#include <json.hpp>

#include "coopee/baselines.hpp"
#include "coopee/model.hpp"
#include "coopee/montecarlo.hpp"
#include "coopee/solver.hpp"

namespace coopee {

nlohmann::json policy_to_json(const Policy& policy);
/// Accepts a bare policy object or any document with a "policy" member.
/// Throws InvalidInput on missing fields or dimension mismatch.
Policy policy_from_json(const nlohmann::json& doc, const ScenarioConfig& config);

nlohmann::json outage_to_json(const OutageReport& report);
nlohmann::json feasibility_to_json(const FeasibilityReport& report);
nlohmann::json solve_result_to_json(const ScenarioConfig& config, const SolveResult& result,
                                    OutageMode reporting = OutageMode::exact);
nlohmann::json evaluation_to_json(const PolicyEvaluation& evaluation);
nlohmann::json monte_carlo_to_json(const MonteCarloReport& report);

/// {"error": {"code": .., "kind": .., "message": ..}}
nlohmann::json error_record(int code, const std::string& kind, const std::string& message);

/// Shortest round-trip decimal form, stable across runs.
std::string format_number(double value);

/// Outage values clamped to [0, 1] for display (the approximation may exceed 1).
OutageReport clamped(OutageReport report);

}  // namespace coopee

#endif  // COOPEE_SERIALIZE_HPP

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

#include "coopee/serialize.hpp"

#include <cmath>

#include "coopee/outage.hpp"

namespace coopee {

using nlohmann::json;

namespace {

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::MatrixXd read_matrix(const json& doc, const char* key, int rows, int cols) {
  if (!doc.contains(key) || !doc.at(key).is_array())
    throw InvalidInput(std::string("policy field '") + key + "' is missing");
  const json& a = doc.at(key);
  if (static_cast<int>(a.size()) != rows)
    throw InvalidInput(std::string("policy field '") + key + "' must have " + std::to_string(rows) + " rows");
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!a[r].is_array() || static_cast<int>(a[r].size()) != cols)
      throw InvalidInput(std::string("policy field '") + key + "[" + std::to_string(r) + "]' must have " +
                         std::to_string(cols) + " entries");
    for (int c = 0; c < cols; ++c) {
      if (!a[r][c].is_number())
        throw InvalidInput(std::string("policy field '") + key + "[" + std::to_string(r) + "][" +
                           std::to_string(c) + "]' is not a number");
      m(r, c) = a[r][c].get<double>();
    }
  }
  return m;
}

}  // namespace

json policy_to_json(const Policy& p) {
  json doc;
  doc["p_u"] = matrix_json(p.p_u);
  doc["p_r"] = matrix_json(p.p_r);
  json transfers = json::array();
  for (const auto& e : p.transfers) transfers.push_back(matrix_json(e));
  doc["transfers"] = std::move(transfers);
  return doc;
}

Policy policy_from_json(const json& doc, const ScenarioConfig& c) {
  const json& body = doc.contains("policy") ? doc.at("policy") : doc;
  if (!body.is_object()) throw InvalidInput("policy document must be an object");
  Policy p = Policy::zeros(c);
  p.p_u = read_matrix(body, "p_u", c.users, c.periods);
  p.p_r = read_matrix(body, "p_r", c.relays, c.periods);
  if (body.contains("transfers")) {
    const json& t = body.at("transfers");
    if (!t.is_array() || static_cast<int>(t.size()) != c.periods)
      throw InvalidInput("policy field 'transfers' must list " + std::to_string(c.periods) + " matrices");
    for (int k = 0; k < c.periods; ++k) {
      json wrapper;
      wrapper["transfers"] = t[k];
      p.transfers[static_cast<std::size_t>(k)] = read_matrix(wrapper, "transfers", c.users, c.users);
    }
  }
  return p;
}

json outage_to_json(const OutageReport& r) {
  json doc;
  doc["mode"] = to_string(r.mode);
  doc["pr_out"] = vector_json(r.pr_out);
  doc["pr_A"] = vector_json(r.pr_A);
  doc["pr_B"] = vector_json(r.pr_B);
  return doc;
}

json feasibility_to_json(const FeasibilityReport& r) {
  json doc;
  doc["feasible"] = r.feasible;
  json audits = json::array();
  for (const auto& a : r.audits) {
    json entry;
    entry["constraint"] = to_string(a.constraint);
    entry["satisfied"] = a.satisfied;
    entry["worst_violation"] = a.worst_violation;
    json where = json::array();
    for (const auto& [node, period] : a.offending) where.push_back({{"node", node}, {"period", period}});
    entry["offending"] = std::move(where);
    audits.push_back(std::move(entry));
  }
  doc["audits"] = std::move(audits);
  doc["outage_exact"] = vector_json(r.outage_exact);
  return doc;
}

json solve_result_to_json(const ScenarioConfig& c, const SolveResult& r, OutageMode reporting) {
  json doc;
  doc["status"] = to_string(r.status);
  doc["binding"] = r.binding ? json(to_string(*r.binding)) : json(nullptr);
  doc["message"] = r.message;
  doc["coding"] = to_string(r.variant.coding);
  doc["transfers_enabled"] = r.variant.transfers;
  doc["depleted"] = r.variant.depleted;
  doc["q_star"] = r.q_star;
  doc["ee_exact"] = r.ee_exact;
  doc["pr_out_0"] = c.pr_out_0;
  doc["enforced_threshold"] = r.enforced_threshold;
  doc["audit_retries"] = r.audit_retries;
  json trace = json::array();
  for (const auto& s : r.trace)
    trace.push_back({{"q", s.q}, {"v", s.v}, {"inner_iterations", s.inner_iterations}});
  doc["trace"] = std::move(trace);
  doc["policy"] = policy_to_json(r.policy);
  const bool powered = (r.policy.p_u.array() > 0.0).all() && (r.policy.p_r.array() >= 0.0).all();
  if (powered) {
    OutageReport report;
    if (reporting == OutageMode::approximate && (r.policy.p_r.array() > 0.0).all())
      report = clamped(outage_report(c, r.policy, OutageMode::approximate, r.variant.coding));
    else
      report = outage_report(c, r.policy, OutageMode::exact, r.variant.coding);
    doc["outage"] = outage_to_json(report);
    doc["total_energy"] = total_energy(c, r.policy, r.variant.coding);
  } else {
    doc["outage"] = nullptr;
    doc["total_energy"] = nullptr;
  }
  doc["feasibility"] = feasibility_to_json(r.feasibility);
  return doc;
}

json evaluation_to_json(const PolicyEvaluation& e) {
  json doc;
  doc["feasible"] = e.feasible;
  doc["ee_exact"] = e.ee_exact;
  doc["uniform_power"] = e.uniform_power;
  doc["power_reduced"] = e.power_reduced;
  doc["message"] = e.message;
  doc["policy"] = policy_to_json(e.policy);
  doc["outage"] = outage_to_json(e.outage);
  doc["feasibility"] = feasibility_to_json(e.feasibility);
  return doc;
}

json monte_carlo_to_json(const MonteCarloReport& r) {
  json doc;
  doc["seed"] = r.seed;
  doc["empirical_ee"] = r.empirical_ee;
  doc["analytic_ee"] = r.analytic_ee;
  json periods = json::array();
  for (std::size_t k = 0; k < r.periods.size(); ++k) {
    const auto& p = r.periods[k];
    periods.push_back({{"period", k},
                       {"trials", p.trials},
                       {"failures", p.failures},
                       {"outage", p.outage},
                       {"ci_low", p.ci_low},
                       {"ci_high", p.ci_high},
                       {"exact", p.exact}});
  }
  doc["periods"] = std::move(periods);
  return doc;
}

json error_record(int code, const std::string& kind, const std::string& message) {
  return json{{"error", {{"code", code}, {"kind", kind}, {"message", message}}}};
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return json(value).dump();
}

OutageReport clamped(OutageReport r) {
  r.pr_out = r.pr_out.cwiseMax(0.0).cwiseMin(1.0);
  r.pr_A = r.pr_A.cwiseMax(0.0).cwiseMin(1.0);
  r.pr_B = r.pr_B.cwiseMax(0.0).cwiseMin(1.0);
  return r;
}

}  // namespace coopee

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

#include "coopee/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <mutex>
#include <iostream>
#include <sstream>
#include <thread>

#include "coopee/baselines.hpp"
#include "coopee/montecarlo.hpp"
#include "coopee/outage.hpp"
#include "coopee/serialize.hpp"

namespace coopee {

using nlohmann::json;

std::string to_string(Command command) {
  switch (command) {
    case Command::optimize: return "optimize";
    case Command::simulate: return "simulate";
    case Command::validate: return "validate";
    case Command::sweep: return "sweep";
    case Command::compare: return "compare";
  }
  return "unknown";
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::pr_out_0: return "pr_out_0";
    case SweepAxis::delta: return "delta";
    case SweepAxis::eta: return "eta";
    case SweepAxis::m: return "m";
  }
  return "unknown";
}

Sweep parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw InvalidInput("sweep must look like axis=v1,v2,...");
  const std::string axis = text.substr(0, eq);
  Sweep sweep;
  if (axis == "pr_out_0") sweep.axis = SweepAxis::pr_out_0;
  else if (axis == "delta") sweep.axis = SweepAxis::delta;
  else if (axis == "eta") sweep.axis = SweepAxis::eta;
  else if (axis == "m") sweep.axis = SweepAxis::m;
  else throw InvalidInput("unknown sweep axis '" + axis + "' (pr_out_0, delta, eta, m)");
  std::stringstream list(text.substr(eq + 1));
  std::string item;
  while (std::getline(list, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      sweep.values.push_back(v);
    } catch (const std::exception&) {
      throw InvalidInput("sweep value '" + item + "' is not a number");
    }
  }
  if (sweep.values.empty()) throw InvalidInput("sweep needs at least one value");
  std::stable_sort(sweep.values.begin(), sweep.values.end());
  return sweep;
}

namespace {

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
  unsigned threads = workers ? workers : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

double total_sent(const Policy& p) {
  double s = 0.0;
  for (const auto& e : p.transfers) s += e.sum();
  return s;
}

int exit_for(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return kExitOk;
    case SolveStatus::infeasible: return kExitInfeasible;
    default: return kExitSolverFailure;
  }
}

void report_status(const SolveResult& r, std::ostream& err) {
  if (r.status == SolveStatus::converged) return;
  std::string message = r.message;
  if (r.binding) message += " (binding: " + to_string(*r.binding) + ")";
  const int code = exit_for(r.status);
  err << error_record(code, code == kExitInfeasible ? "infeasible" : "solver_failure", message).dump()
      << "\n";
}

SweepRow row_from(const ScenarioConfig& c, const SolveResult& r, OutageMode reporting) {
  SweepRow row;
  row.status = to_string(r.status);
  row.feasible = r.status == SolveStatus::converged && r.feasibility.feasible;
  if (!row.feasible) {
    row.reason = r.binding ? to_string(*r.binding) : "solver";
    return row;
  }
  row.ee_exact = r.ee_exact;
  row.q_star = r.q_star;
  row.energy = total_energy(c, r.policy, r.variant.coding);
  row.transferred = total_sent(r.policy);
  OutageReport report;
  if (reporting == OutageMode::approximate && (r.policy.p_r.array() > 0.0).all())
    report = clamped(outage_report(c, r.policy, OutageMode::approximate, r.variant.coding));
  else
    report = outage_report(c, r.policy, OutageMode::exact, r.variant.coding);
  row.outage.assign(report.pr_out.data(), report.pr_out.data() + report.pr_out.size());
  return row;
}

}  // namespace

ScenarioConfig prepare_scenario(const ExperimentSpec& spec) {
  if (spec.scenario_path.empty()) throw InvalidInput("--scenario is required");
  json doc = load_json_file(spec.scenario_path);
  for (const auto& o : spec.overrides) apply_override(doc, o);
  return scenario_from_json(doc);
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const Sweep& sweep,
                                const SolverOptions& options, OutageMode reporting,
                                unsigned workers) {
  std::vector<SweepRow> rows(sweep.values.size());
  parallel_for(rows.size(), workers, [&](std::size_t i) {
    const double v = sweep.values[i];
    SweepRow& row = rows[i];
    ScenarioConfig c = base;
    try {
      switch (sweep.axis) {
        case SweepAxis::pr_out_0: c.pr_out_0 = v; break;
        case SweepAxis::delta: c = shift_relays(base, v); break;
        case SweepAxis::eta: c.eta = v; break;
        case SweepAxis::m: c.fading_m = v; break;
      }
      validate(c);
    } catch (const InvalidInput& e) {
      row.value = v;
      row.status = "invalid";
      row.reason = sweep.axis == SweepAxis::delta ? "geometry" : "invalid";
      return;
    }
    row = row_from(c, dinkelbach_optimize(c, options), reporting);
    row.value = v;
  });
  return rows;
}

std::vector<CompareRow> run_compare(const ScenarioConfig& base, const std::vector<double>& thresholds,
                                    const SolverOptions& options, unsigned workers) {
  static constexpr int kSchemes = 5;
  std::vector<CompareRow> rows(thresholds.size() * kSchemes);
  parallel_for(thresholds.size(), workers, [&](std::size_t t) {
    ScenarioConfig c = base;
    c.pr_out_0 = thresholds[t];
    validate(c);
    auto fill = [&](int slot, const std::string& scheme, const SolveResult& r) {
      CompareRow& row = rows[t * kSchemes + static_cast<std::size_t>(slot)];
      row.pr_out_0 = c.pr_out_0;
      row.scheme = scheme;
      row.status = to_string(r.status);
      if (r.status != SolveStatus::converged) return;
      row.ee_approx = r.q_star;
      row.ee_exact = r.ee_exact;
      row.max_outage_exact = r.feasibility.outage_exact.maxCoeff();
    };
    const SolveResult optimized = dinkelbach_optimize(c, options);
    fill(0, "optimized", optimized);
    fill(1, "no_transfer", no_transfer_policy(c, options));
    fill(2, "depleted_energy", depleted_energy_policy(c, options));

    CompareRow& uniform = rows[t * kSchemes + 3];
    uniform.pr_out_0 = c.pr_out_0;
    uniform.scheme = "uniform_power";
    if (optimized.status == SolveStatus::converged) {
      const PolicyEvaluation e = uniform_power_policy(c, optimized);
      uniform.status = e.feasible ? "evaluated" : "infeasible";
      if (e.feasible) {
        uniform.ee_exact = e.ee_exact;
        uniform.max_outage_exact = e.outage.pr_out.maxCoeff();
        if ((e.policy.p_r.array() > 0.0).all()) {
          const OutageReport approx = outage_report(c, e.policy, OutageMode::approximate);
          uniform.ee_approx = energy_efficiency(c, e.policy, approx);
        } else {
          uniform.ee_approx = e.ee_exact;
        }
      }
    } else {
      uniform.status = "no_reference";
    }
    fill(4, "nonc_df", nonc_df_policy(c, options));
  });
  return rows;
}

std::string sweep_csv(const Sweep& sweep, const std::vector<SweepRow>& rows, int periods) {
  std::ostringstream out;
  out << to_string(sweep.axis)
      << ",feasible,status,reason,ee_exact,q_star,total_energy,transferred,max_outage";
  for (int k = 0; k < periods; ++k) out << ",outage_" << k;
  out << "\n";
  for (const auto& r : rows) {
    out << format_number(r.value) << ',' << (r.feasible ? "true" : "false") << ',' << r.status << ','
        << r.reason;
    if (r.feasible) {
      const double worst = r.outage.empty() ? 0.0 : *std::max_element(r.outage.begin(), r.outage.end());
      out << ',' << format_number(r.ee_exact) << ',' << format_number(r.q_star) << ','
          << format_number(r.energy) << ',' << format_number(r.transferred) << ',' << format_number(worst);
      for (double o : r.outage) out << ',' << format_number(o);
    } else {
      out << ",,,,,";
      for (int k = 0; k < periods; ++k) out << ',';
    }
    out << "\n";
  }
  return out.str();
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
  std::ostringstream out;
  out << "pr_out_0,scheme,status,ee_approx,ee_exact,max_outage_exact\n";
  for (const auto& r : rows) {
    out << format_number(r.pr_out_0) << ',' << r.scheme << ',' << r.status;
    if (r.status == "converged" || r.status == "evaluated")
      out << ',' << format_number(r.ee_approx) << ',' << format_number(r.ee_exact) << ','
          << format_number(r.max_outage_exact);
    else
      out << ",,,";
    out << "\n";
  }
  return out.str();
}

int run(const ExperimentSpec& spec, std::ostream& err) {
  try {
    spec.solver.check();
    const ScenarioConfig config = prepare_scenario(spec);
    switch (spec.command) {
      case Command::optimize: {
        const SolveResult r = dinkelbach_optimize(config, spec.solver);
        write_text(spec.output_path, dump(solve_result_to_json(config, r, spec.reporting)));
        report_status(r, err);
        return exit_for(r.status);
      }
      case Command::simulate: {
        Policy policy;
        std::string source = "file";
        if (!spec.policy_path.empty()) {
          policy = policy_from_json(load_json_file(spec.policy_path), config);
        } else {
          const SolveResult r = dinkelbach_optimize(config, spec.solver);
          if (r.status != SolveStatus::converged) {
            report_status(r, err);
            return exit_for(r.status);
          }
          policy = r.policy;
          source = "optimized";
        }
        MonteCarloOptions mc;
        mc.trials = spec.trials;
        mc.seed = spec.seed;
        mc.threads = spec.workers;
        const MonteCarloReport report = estimate_outage(config, policy, mc);
        json doc;
        doc["policy_source"] = source;
        doc["trials"] = spec.trials;
        doc["monte_carlo"] = monte_carlo_to_json(report);
        write_text(spec.output_path, dump(doc));
        return kExitOk;
      }
      case Command::validate: {
        if (spec.policy_path.empty()) throw InvalidInput("--policy is required for validate");
        const json doc = load_json_file(spec.policy_path);
        const Policy policy = policy_from_json(doc, config);
        Coding coding = Coding::network_coded;
        if (doc.contains("coding") && doc.at("coding") == to_string(Coding::nonc_df)) coding = Coding::nonc_df;
        const FeasibilityReport report = validate_policy(config, policy, coding, true);
        write_text(spec.output_path, dump(feasibility_to_json(report)));
        if (report.feasible) return kExitOk;
        std::string violated;
        for (const auto& a : report.audits)
          if (!a.satisfied) violated += (violated.empty() ? "" : ", ") + to_string(a.constraint);
        err << error_record(kExitInfeasible, "infeasible", "policy violates: " + violated).dump() << "\n";
        return kExitInfeasible;
      }
      case Command::sweep: {
        if (!spec.sweep) throw InvalidInput("--sweep is required for sweep");
        const auto rows = run_sweep(config, *spec.sweep, spec.solver, spec.reporting, spec.workers);
        write_text(spec.output_path, sweep_csv(*spec.sweep, rows, config.periods));
        return kExitOk;
      }
      case Command::compare: {
        std::vector<double> thresholds{config.pr_out_0};
        if (spec.sweep) {
          if (spec.sweep->axis != SweepAxis::pr_out_0)
            throw InvalidInput("compare only sweeps pr_out_0");
          thresholds = spec.sweep->values;
        }
        const auto rows = run_compare(config, thresholds, spec.solver, spec.workers);
        write_text(spec.output_path, compare_csv(rows));
        return kExitOk;
      }
    }
    throw InvalidInput("unknown command");
  } catch (const InvalidInput& e) {
    err << error_record(kExitInvalidInput, "invalid_input", e.what()).dump() << "\n";
    return kExitInvalidInput;
  } catch (const json::exception& e) {
    err << error_record(kExitInvalidInput, "invalid_input", e.what()).dump() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << error_record(kExitSolverFailure, "solver_failure", e.what()).dump() << "\n";
    return kExitSolverFailure;
  }
}

}  // namespace coopee

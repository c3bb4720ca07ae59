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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coopee/baselines.hpp"
#include "coopee/experiment.hpp"
#include "coopee/montecarlo.hpp"
#include "coopee/outage.hpp"
#include "coopee/solver.hpp"
#include "coopee/special.hpp"

using namespace coopee;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[1024];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string scenario(const std::string& name) { return std::string(COOPEE_SCENARIO_DIR) + "/" + name; }

const ScenarioConfig& bundled() {
  static const ScenarioConfig c = load_scenario(scenario("paper_sec5.json"));
  return c;
}

const std::vector<double> kTradeoff{1e-4, 5e-5, 1e-5, 1e-6, 6e-7};  // loosest first
const std::vector<double> kTight{6e-7, 1e-6, 2e-6, 5e-6, 1e-5};
constexpr double kDominanceSlack = 1e-4;  // relative, solver tolerance for EE comparisons

// Every solve made by criteria 6 to 8, audited again by criterion 9.
struct Solved {
  std::string label;
  ScenarioConfig config;
  SolveResult result;
};
std::deque<Solved>& registry() {
  static std::deque<Solved> r;
  return r;
}

const SolveResult& remember(std::string label, const ScenarioConfig& c, SolveResult r) {
  registry().push_back({std::move(label), c, std::move(r)});
  return registry().back().result;
}

double feasible_ee(const SolveResult& r) { return r.status == SolveStatus::converged ? r.ee_exact : 0.0; }

// ---------------------------------------------------------------------------

// Outage by enumerating every success/failure pattern of every link.
double enumerate_links(const LinkOutages& links, int users) {
  const int relays = static_cast<int>(links.relays.size());
  const int n_links = users * relays + relays;
  double fail = 0.0;
  for (std::uint32_t pattern = 0; pattern < (1u << n_links); ++pattern) {
    double p = 1.0;
    int delivered = 0;
    for (int j = 0; j < relays; ++j) {
      bool decoded = true;
      for (int i = 0; i < users; ++i) {
        const bool ok = pattern >> (j * users + i) & 1u;
        p *= ok ? 1.0 - links.users(i, j) : links.users(i, j);
        decoded = decoded && ok;
      }
      const bool fwd = pattern >> (users * relays + j) & 1u;
      p *= fwd ? 1.0 - links.relays(j) : links.relays(j);
      delivered += decoded && fwd;
    }
    if (delivered < users) fail += p;
  }
  return fail;
}

Verdict criterion_enumeration() {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0, library_time = 0.0;
  const auto t0 = Clock::now();
  for (int n = 0; n < 1000; ++n) {
    const int users = 1 + n % 3;
    const int relays = users + static_cast<int>(rng() % static_cast<unsigned>(5 - users));
    LinkOutages links;
    links.users.resize(users, relays);
    links.relays.resize(relays);
    for (int i = 0; i < users; ++i)
      for (int j = 0; j < relays; ++j) links.users(i, j) = u(rng);
    for (int j = 0; j < relays; ++j) links.relays(j) = u(rng);
    const auto t1 = Clock::now();
    const double got = network_outage_from_links(links, users).pr_out;
    library_time += seconds_since(t1);
    worst = std::max(worst, std::abs(got - enumerate_links(links, users)));
  }
  const double total = seconds_since(t0);
  return {worst <= 1e-12 && total < 10.0,
          fmt("1000 instances (M<=3, N<=4): max |exact - enumeration| = %.2e, library %.3f s, total %.2f s",
              worst, library_time, total)};
}

Verdict criterion_rayleigh() {
  LinkParameters link;
  link.m = 1.0;
  link.rate = link.bandwidth = link.n0 = link.distance = link.omega = 1.0;
  double worst = 0.0;
  int points = 0;
  for (double lb = std::log(1e-9); lb <= std::log(10.0) + 1e-12; lb += (std::log(10.0) - std::log(1e-9)) / 999.0) {
    const double p = std::exp(-lb);
    const double b = outage_argument(p, link);
    const double closed = -std::expm1(-b);
    worst = std::max(worst, std::abs(per_link_outage_exact(p, link) - closed) / closed);
    ++points;
  }
  return {worst <= 1e-12, fmt("%d log-spaced b in [1e-9, 10]: max relative error %.2e", points, worst)};
}

Verdict criterion_approximation() {
  std::mt19937_64 rng(3003);
  std::uniform_real_distribution<double> mdist(0.5, 3.0), bdist(std::log(1e-7), std::log(1e-3));
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const int users = 1 + n % 3;
    const int relays = users + static_cast<int>(rng() % static_cast<unsigned>(5 - users));
    const double m = std::round(mdist(rng) * 4.0) / 4.0;
    LinkOutages links;
    LinkCoefficients c;
    links.users.resize(users, relays);
    links.relays.resize(relays);
    c.users.resize(users, relays);
    c.relays.resize(relays);
    auto draw = [&](double& pe, double& coeff) {
      double b = std::exp(bdist(rng));
      while (regularized_lower_gamma(m, b) > 1e-3) b *= 0.5;
      pe = regularized_lower_gamma(m, b);
      coeff = std::pow(b, m) / gamma_function(m + 1.0);  // reproduces b at unit power
    };
    for (int i = 0; i < users; ++i)
      for (int j = 0; j < relays; ++j) draw(links.users(i, j), c.users(i, j));
    for (int j = 0; j < relays; ++j) draw(links.relays(j), c.relays(j));
    const double exact = network_outage_from_links(links, users).pr_out;
    const double approx =
        network_outage_approx(Eigen::VectorXd::Ones(users), Eigen::VectorXd::Ones(relays), c, m, users).pr_out;
    worst = std::max(worst, std::abs(approx - exact) / exact);
  }
  return {worst <= 0.05, fmt("1000 instances, all link outages <= 1e-3, m in [0.5, 3]: max relative error %.2f%%", 100 * worst)};
}

// Single-period operating point with a common power scale tuned to `target`.
std::pair<ScenarioConfig, Policy> operating_point(double m, double target) {
  ScenarioConfig c = bundled();
  c.periods = 1;
  c.fading_m = m;
  c.arrivals = c.arrivals.col(0).eval();
  c.arrivals.setConstant(1e3);
  Policy p = Policy::zeros(c);
  double lo = std::log(1e-9), hi = std::log(c.p_max);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    p.p_u.setConstant(std::exp(mid));
    p.p_r.setConstant(std::exp(mid));
    (outage_report(c, p, OutageMode::exact).pr_out(0) > target ? lo : hi) = mid;
  }
  p.p_u.setConstant(std::exp(hi));
  p.p_r.setConstant(std::exp(hi));
  return {c, p};
}

Verdict criterion_monte_carlo() {
  Verdict v;
  const std::pair<double, double> points[] = {{1.0, 1e-2}, {3.0, 3e-3}};
  for (const auto& [m, target] : points) {
    const auto [c, p] = operating_point(m, target);
    const double exact = outage_report(c, p, OutageMode::exact).pr_out(0);
    MonteCarloOptions o;
    o.trials = 1'000'000;
    int inside = 0;
    double slowest = 0.0;
    const auto t0 = Clock::now();
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      o.seed = seed;
      const auto t1 = Clock::now();
      const MonteCarloReport r = estimate_outage(c, p, o);
      slowest = std::max(slowest, seconds_since(t1));
      const double sigma = std::sqrt(exact * (1 - exact) / static_cast<double>(o.trials));
      inside += std::abs(r.periods[0].outage - exact) <= 3.0 * sigma;
    }
    const double total = seconds_since(t0);
    const bool ok = exact >= 1e-3 && exact <= 1e-1 && inside >= 38 && total < 60.0;
    v.pass = v.pass && ok;
    v.detail += fmt("%sm=%.0f Pr_out=%.3e: %d/40 seeds within 3 sigma, %.2f s per 1e6 trials, %.1f s for 40",
                    v.detail.empty() ? "" : "; ", m, exact, inside, slowest, total);
  }
  return v;
}

// Causal, power-feasible random policy for the bundled scenario.
Policy random_causal_policy(const ScenarioConfig& c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0), frac(0.1, 0.9), logp(std::log(1e-2), std::log(c.p_max));
  Policy p = Policy::zeros(c);
  for (int k = 0; k < c.periods; ++k) {
    for (int j = 0; j < c.relays; ++j) p.p_r(j, k) = std::exp(logp(rng));
    for (int i = 0; i < c.users; ++i)
      for (int t = 0; t < c.users; ++t)
        if (t != i) p.transfers[k](i, t) = 0.2 * u(rng) * c.arrivals(i, k);
    EnergyLedger l = energy_ledger(c, p);
    for (int i = 0; i < c.users; ++i)
      if (l.available(i, k) <= 1e-6) p.transfers[k].row(i).setZero();
    l = energy_ledger(c, p);
    for (int i = 0; i < c.users; ++i)
      p.p_u(i, k) = std::min(c.p_max, frac(rng) * l.available(i, k) / c.slot);
  }
  return p;
}

Verdict criterion_convexity() {
  const ScenarioConfig& c = bundled();
  const SolveResult opt = dinkelbach_optimize(c);
  const double q = opt.q_star;
  std::mt19937_64 rng(5005);
  std::normal_distribution<double> n(0.0, 1.0);
  double min_curv = HUGE_VAL, worst_grad = 0.0;
  int points = 0, infeasible = 0;
  while (points < 20) {
    const Policy p = random_causal_policy(c, rng);
    if (!validate_policy(c, p, Coding::network_coded, false).feasible) {
      ++infeasible;
      continue;
    }
    ++points;
    const Eigen::VectorXd x = transform_policy(c, p);
    const VPrimeEvaluation v = evaluate_v_prime(c, q, x);
    for (int d = 0; d < 100; ++d) {
      Eigen::VectorXd dir(x.size());
      for (Eigen::Index k = 0; k < dir.size(); ++k) dir(k) = n(rng);
      min_curv = std::min(min_curv, dir.dot(v.hessian * dir));
    }
    Eigen::VectorXd fd(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(x(k)));
      Eigen::VectorXd xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      fd(k) = (evaluate_v_prime(c, q, xp).value - evaluate_v_prime(c, q, xm).value) / (2 * h);
    }
    worst_grad = std::max(worst_grad, (fd - v.gradient).lpNorm<Eigen::Infinity>() / v.gradient.lpNorm<Eigen::Infinity>());
  }
  return {min_curv >= -1e-9 && worst_grad <= 1e-6 && infeasible == 0,
          fmt("bundled scenario, q = %.6g, 20 causal points x 100 directions: min v.Hv = %.3e; "
              "gradient vs central differences max relative error %.2e",
              q, min_curv, worst_grad)};
}

Verdict criterion_oracle() {
  const char* toys[] = {"toy_m1n1k1.json", "toy_m1n1k2.json", "toy_m1n2k2.json",
                        "toy_m2n2k1.json", "toy_m2n2k2.json", "toy_m2n2k2_lossy.json"};
  Verdict v;
  double worst = 0.0, worst_raw = 0.0;
  int monotone = 0, zero = 0;
  for (const char* name : toys) {
    const ScenarioConfig c = load_scenario(scenario(name));
    const SolveResult& r = remember(name, c, dinkelbach_optimize(c));
    SolverOptions raw;
    raw.calibrate_threshold = false;
    const SolveResult uncalibrated = dinkelbach_optimize(c, raw);
    const SolveResult grid = brute_force_optimize(c);
    if (r.status != SolveStatus::converged || grid.status != SolveStatus::converged) {
      v.pass = false;
      v.detail += fmt("%s: solver %s, oracle %s; ", name, to_string(r.status).c_str(), to_string(grid.status).c_str());
      continue;
    }
    const double gap = std::abs(r.ee_exact - grid.ee_exact) / grid.ee_exact;
    worst = std::max(worst, gap);
    worst_raw = std::max(worst_raw, std::abs(uncalibrated.ee_exact - grid.ee_exact) / grid.ee_exact);
    bool up = true;
    for (std::size_t s = 1; s < r.trace.size(); ++s) up = up && r.trace[s].q >= r.trace[s - 1].q;
    monotone += up;
    zero += std::abs(r.trace.back().v) <= SolverOptions{}.resolved_q_tol(c);
    v.pass = v.pass && gap <= 0.01 && up && std::abs(r.trace.back().v) <= SolverOptions{}.resolved_q_tol(c);
  }
  const int n = static_cast<int>(std::size(toys));
  v.detail += fmt("%d toys (M,N,K <= 2): max EE gap to grid oracle %.3f%% (%.3f%% without threshold calibration); "
                  "q-trace nondecreasing %d/%d; |V(q*)| <= tol %d/%d",
                  n, 100 * worst, 100 * worst_raw, monotone, n, zero, n);
  return v;
}

Verdict criterion_ordering() {
  Verdict v;
  bool order = true, uniform = true, coding = true;
  std::string uniform_detail, ratio_detail;
  double min_ratio = HUGE_VAL;
  for (double t : kTight) {
    ScenarioConfig c = bundled();
    c.pr_out_0 = t;
    const std::string tag = fmt("%g", t);
    const SolveResult& opt = remember("optimized@" + tag, c, dinkelbach_optimize(c));
    const SolveResult& none = remember("no_transfer@" + tag, c, no_transfer_policy(c));
    const SolveResult& dep = remember("depleted@" + tag, c, depleted_energy_policy(c));
    const SolveResult& nonc = remember("nonc_df@" + tag, c, nonc_df_policy(c));
    if (opt.status != SolveStatus::converged) {
      v.pass = false;
      v.detail += "optimized infeasible at " + tag + "; ";
      continue;
    }
    // A baseline that cannot meet the requirement delivers no admissible EE.
    const double e_opt = opt.ee_exact, e_none = feasible_ee(none), e_dep = feasible_ee(dep);
    order = order && e_opt >= e_none * (1 - kDominanceSlack) && e_none >= e_dep * (1 - kDominanceSlack);
    const PolicyEvaluation u = uniform_power_policy(c, opt);
    const double e_uni = u.feasible ? u.ee_exact : 0.0;
    const bool uni_ok = e_opt >= e_uni * (1 - kDominanceSlack);
    uniform = uniform && uni_ok;
    uniform_detail += fmt(" %s:%.3f%s", tag.c_str(), e_opt / e_uni,
                          uni_ok ? "" : fmt("(x, uniform outage %.2e)", u.outage.pr_out.maxCoeff()).c_str());
    const double ratio = e_opt / feasible_ee(nonc);
    min_ratio = std::min(min_ratio, ratio);
    coding = coding && ratio >= 1.1;
    v.detail += fmt("%s opt/none/depl = %.0f/%.0f/%.0f; ", tag.c_str(), e_opt, e_none, e_dep);
  }
  v.pass = v.pass && order && uniform && coding;
  v.detail += fmt("order %s; optimized/uniform%s -> %s; NC/NoNC-DF EE ratio min %.3f (gate 1.10) -> %s",
                  order ? "ok" : "VIOLATED", uniform_detail.c_str(), uniform ? "ok" : "VIOLATED", min_ratio,
                  coding ? "ok" : "VIOLATED");
  return v;
}

Verdict criterion_sweeps() {
  Verdict v;
  // Threshold sweep at delta = 0.
  std::vector<double> ee;
  for (double t : kTradeoff) {
    ScenarioConfig c = bundled();
    c.pr_out_0 = t;
    ee.push_back(feasible_ee(remember(fmt("sweep@%g", t), c, dinkelbach_optimize(c))));
  }
  bool strict = ee.back() > 0.0;
  for (std::size_t s = 1; s < ee.size(); ++s) strict = strict && ee[s] < ee[s - 1];
  v.detail += fmt("threshold sweep EE %.0f > %.0f > %.0f > %.0f > %.0f %s; ", ee[0], ee[1], ee[2], ee[3], ee[4],
                  strict ? "ok" : "VIOLATED");

  // Relay shift.
  bool shift_ok = true;
  double loss150 = 0.0, loss300 = 0.0;
  int both = 0;
  std::string infeasible300;
  for (double t : kTradeoff) {
    double e[3];
    const double deltas[] = {0.0, 150.0, 300.0};
    for (int d = 0; d < 3; ++d) {
      ScenarioConfig c = shift_relays(bundled(), deltas[d]);
      c.pr_out_0 = t;
      e[d] = feasible_ee(remember(fmt("delta%.0f@%g", deltas[d], t), c, dinkelbach_optimize(c)));
    }
    shift_ok = shift_ok && e[0] > 0.0 && e[1] <= e[0] * (1 + kDominanceSlack) && e[2] <= e[1] * (1 + kDominanceSlack);
    if (e[2] > 0.0) {
      loss150 += 1 - e[1] / e[0];
      loss300 += 1 - e[2] / e[0];
      ++both;
    } else {
      infeasible300 += fmt(" %g", t);
    }
  }
  v.detail += fmt("delta 0/150/300 nonincreasing %s (mean EE loss %.1f%% / %.1f%% where all feasible; "
                  "delta=300 infeasible at%s); ",
                  shift_ok ? "ok" : "VIOLATED", both ? 100 * loss150 / both : 0.0, both ? 100 * loss300 / both : 0.0,
                  infeasible300.empty() ? " none" : infeasible300.c_str());

  // Transfer efficiency at delta = 150.
  bool eta_ok = true, overlap = false;
  double spread = 0.0, moved = 0.0;
  std::string infeasible_eta;
  for (double t : kTradeoff) {
    double e[3];
    const double etas[] = {0.2, 0.6, 1.0};
    for (int d = 0; d < 3; ++d) {
      ScenarioConfig c = shift_relays(bundled(), 150.0);
      c.pr_out_0 = t;
      c.eta = etas[d];
      const SolveResult& r = remember(fmt("eta%.1f@%g", etas[d], t), c, dinkelbach_optimize(c));
      e[d] = feasible_ee(r);
      if (e[d] == 0.0) infeasible_eta += fmt(" eta=%.1f@%g", etas[d], t);
      if (t == kTradeoff.front() && etas[d] < 1.0) {
        double sent = 0.0;
        for (const auto& m : r.policy.transfers) sent += m.sum();
        moved = std::max(moved, sent);
      }
    }
    eta_ok = eta_ok && e[1] >= e[0] * (1 - kDominanceSlack) && e[2] >= e[1] * (1 - kDominanceSlack);
    if (t == kTradeoff.front()) {
      spread = (std::max({e[0], e[1], e[2]}) - std::min({e[0], e[1], e[2]})) / e[2];
      // Zero-transfer solutions must not depend on eta.
      overlap = e[0] > 0.0 && moved <= 1e-6 * bundled().arrivals.sum() && spread <= 1e-6;
    }
  }
  v.detail += fmt("eta 0.2/0.6/1 nondecreasing %s (infeasible:%s); at Pr_out,0=1e-4 transfers %.1e J, "
                  "EE spread %.1e -> overlap %s",
                  eta_ok ? "ok" : "VIOLATED", infeasible_eta.empty() ? " none" : infeasible_eta.c_str(), moved,
                  spread, overlap ? "ok" : "VIOLATED");
  v.pass = strict && shift_ok && eta_ok && overlap;
  return v;
}

Verdict criterion_audit() {
  int converged = 0, clean = 0, infeasible = 0, silent = 0;
  for (const Solved& s : registry()) {
    const SolveResult& r = s.result;
    if (r.status == SolveStatus::converged) {
      ++converged;
      const FeasibilityReport a = validate_policy(s.config, r.policy, r.variant.coding, true);
      clean += a.audit(ConstraintClass::outage).satisfied && a.audit(ConstraintClass::causality).satisfied && a.feasible;
    } else {
      ++infeasible;
      silent += r.status != SolveStatus::infeasible;
    }
  }
  ScenarioConfig c = shift_relays(bundled(), 300.0);
  c.pr_out_0 = 6e-7;
  const SolveResult far = dinkelbach_optimize(c);
  const bool distinguished = far.status == SolveStatus::infeasible && far.binding.has_value();
  return {converged == clean && silent == 0 && distinguished && converged > 0,
          fmt("%d converged solves, %d pass exact outage + causality audits; %d non-converged, %d without the "
              "infeasible status; delta=300 at 6e-7 -> %s (binding %s)",
              converged, clean, infeasible, silent, to_string(far.status).c_str(),
              far.binding ? to_string(*far.binding).c_str() : "none")};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict criterion_determinism() {
  const fs::path dir = fs::temp_directory_path() / "coopee_acceptance";
  fs::create_directories(dir);
  struct Case {
    Command command;
    std::string sweep;
    const char* name;
  };
  const Case cases[] = {{Command::optimize, "", "optimize.json"},
                        {Command::sweep, "pr_out_0=1e-4,5e-5,1e-5,1e-6,6e-7", "sweep.csv"},
                        {Command::compare, "pr_out_0=1e-6,1e-5", "compare.csv"},
                        {Command::simulate, "", "simulate.json"}};
  int identical = 0;
  std::size_t bytes = 0;
  for (const Case& k : cases) {
    std::string out[2];
    for (int run_no = 0; run_no < 2; ++run_no) {
      ExperimentSpec spec;
      spec.command = k.command;
      spec.scenario_path = scenario("paper_sec5.json");
      if (!k.sweep.empty()) spec.sweep = parse_sweep(k.sweep);
      spec.trials = 200'000;
      spec.seed = 17;
      spec.workers = run_no == 0 ? 1 : 2;
      spec.output_path = (dir / (std::to_string(run_no) + k.name)).string();
      std::ostringstream err;
      if (run(spec, err) != kExitOk) return {false, fmt("%s exited with an error: %s", k.name, err.str().c_str())};
      out[run_no] = slurp(spec.output_path);
    }
    identical += !out[0].empty() && out[0] == out[1];
    bytes += out[0].size();
  }
  return {identical == 4, fmt("optimize, sweep, compare, simulate run twice (1 and 2 workers): %d/4 byte-identical (%zu bytes)",
                              identical, bytes)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> check;
  };
  const Criterion criteria[] = {
      {"exact outage vs exhaustive enumeration", criterion_enumeration},
      {"Rayleigh closed form", criterion_rayleigh},
      {"approximation tightness", criterion_approximation},
      {"Monte Carlo agreement", criterion_monte_carlo},
      {"convexity certificate", criterion_convexity},
      {"optimizer vs grid oracle", criterion_oracle},
      {"dominance and ordering", criterion_ordering},
      {"sweep monotonicity", criterion_sweeps},
      {"feasibility audit", criterion_audit},
      {"determinism", criterion_determinism},
  };
  int failed = 0, index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << index << "] " << c.name << " (" << fmt("%.1f", seconds_since(t0))
              << " s): " << v.detail << std::endl;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << (10 - failed) << "/10" << std::endl;
  return failed ? 1 : 0;
}

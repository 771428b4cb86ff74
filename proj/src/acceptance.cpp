// Copyright 2026 The ringbalance Authors.
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

#include "ringbalance/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "ringbalance/bench.hpp"
#include "ringbalance/fixtures.hpp"
#include "ringbalance/instances.hpp"
#include "ringbalance/oracle.hpp"
#include "ringbalance/variants.hpp"

namespace ringbalance {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x, int digits = 3) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << x;
  return s.str();
}

struct SuiteCase {
  Instance inst;
  std::uint64_t seed;
};

std::vector<SuiteCase> random_suite(std::uint64_t seed, int count) {
  static constexpr Count kPmax[] = {0, 1, 64};
  static constexpr double kDensity[] = {0.2, 1.0};
  std::mt19937_64 rng(seed);
  std::vector<SuiteCase> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    const int m = std::uniform_int_distribution<int>(n, 16)(rng);
    const std::uint64_t s = rng();
    out.push_back({gen_random(n, m, kPmax[k % 3], kDensity[(k / 3) % 2], s), s});
  }
  return out;
}

struct Combo {
  EngineKind engine;
  Variant variant;
};

constexpr Combo kCombos[] = {
    {EngineKind::Sync, Variant::Base},       {EngineKind::Async, Variant::Base},
    {EngineKind::Sync, Variant::TwoApprox},  {EngineKind::Async, Variant::TwoApprox},
    {EngineKind::Sync, Variant::EpsApprox},  {EngineKind::Async, Variant::EpsApprox},
    {EngineKind::Sync, Variant::Gather},     {EngineKind::Async, Variant::Gather},
};

// Everything criteria 3, 4, 5 and 7 need from one pass over the suite.
struct SuiteStats {
  int instances = 0;
  int runs = 0;
  int infeasible = 0;
  std::string first_failure;
  int positive_opt = 0;
  int base_violations = 0;
  double base_max = 0;
  int two_violations = 0;
  double two_max = 0;
  int eps_violations = 0;
  double eps_max = 0;
  int gather_mismatch = 0;
  // Same bounds against the best assignment under the run's label quotas.
  int base_quota_violations = 0;
  int two_quota_violations = 0;
  int eps_quota_violations = 0;
  int estimate_cases = 0;
  int estimate_failures = 0;
  double seconds = 0;
};

SuiteStats run_suite(const std::vector<SuiteCase>& suite) {
  SuiteStats st;
  const auto t0 = Clock::now();
  for (const auto& c : suite) {
    ++st.instances;
    const Count opt = optimal_assignment(c.inst).cost;
    const Count p = c.inst.max_weight();
    if (opt > 0) ++st.positive_opt;
    for (const Combo& combo : kCombos) {
      ++st.runs;
      ProtocolConfig cfg;
      cfg.engine = combo.engine;
      cfg.variant = combo.variant;
      cfg.seed = c.seed;
      cfg.delay = DelayModel::uniform(1, 3, c.seed);
      RunResult run;
      try {
        run = run_protocol(c.inst, cfg);
      } catch (const std::exception& e) {
        ++st.infeasible;
        if (st.first_failure.empty()) st.first_failure = e.what();
        continue;
      }
      if (!is_balanced(run.assignment, c.inst)) {
        ++st.infeasible;
        if (st.first_failure.empty()) {
          st.first_failure = "unbalanced " + std::string(to_string(combo.variant));
        }
        continue;
      }
      const Count got = cost(run.assignment, c.inst);
      if (combo.variant == Variant::Gather) {
        if (got != opt) ++st.gather_mismatch;
        continue;
      }
      if (combo.engine == EngineKind::Sync && combo.variant == Variant::Base && p >= 1) {
        ++st.estimate_cases;
        const Count ph = run.estimate.p_hat;
        const bool pow2 = ph > 0 && (ph & (ph - 1)) == 0;
        const bool once = std::all_of(run.estimate.speak_count.begin(),
                                      run.estimate.speak_count.end(), [](int k) { return k == 1; });
        if (!pow2 || ph < p || ph > 2 * p || !once) ++st.estimate_failures;
      }
      std::vector<int> capacity;
      for (int label : run.labels) {
        capacity.push_back(quota(label, c.inst.agents(), c.inst.colors()));
      }
      const Count fixed = quota_optimal(c.inst, capacity).cost;
      auto over = [&](const Rational& bound) {
        return fixed == 0 ? got > 0 : Rational(got, fixed) > bound;
      };
      switch (combo.variant) {
        case Variant::Base: st.base_quota_violations += over(3); break;
        case Variant::TwoApprox: st.two_quota_violations += over(2); break;
        case Variant::EpsApprox: st.eps_quota_violations += over(Rational(5, 2)); break;
        case Variant::Gather: break;
      }
      if (opt <= 0) continue;
      const Rational ratio(got, opt);
      const double r = to_double(ratio);
      switch (combo.variant) {
        case Variant::Base:
          st.base_max = std::max(st.base_max, r);
          if (ratio > 3) ++st.base_violations;
          break;
        case Variant::TwoApprox:
          st.two_max = std::max(st.two_max, r);
          if (ratio > 2) ++st.two_violations;
          break;
        case Variant::EpsApprox:
          st.eps_max = std::max(st.eps_max, r);
          if (ratio > Rational(5, 2)) ++st.eps_violations;
          break;
        case Variant::Gather: break;
      }
    }
  }
  st.seconds = seconds_since(t0);
  return st;
}

DelayModel adversarial_table(int n) {
  DelayModel::PerLink table;
  table.fallback = 2;
  for (AgentIndex s = 0; s < n; ++s) {
    table.delays[{s, Direction::Clockwise}] = {1 + (s * 7) % 11, 13, 1, 2 + s % 3};
    table.delays[{s, Direction::CounterClockwise}] = {9, 1 + (s * 5) % 4, 17};
  }
  return DelayModel::per_link(std::move(table));
}

CriterionResult c1_oracle_fixtures() {
  CriterionResult r{1, "oracle exactness on paired fixtures", false, ""};
  const auto t0 = Clock::now();
  const Count one = optimal_assignment(fixtures::example_one()).cost;
  const Count two = optimal_assignment(fixtures::example_two()).cost;
  const double secs = seconds_since(t0);
  r.pass = one == 16 && two == 12 && secs < 1.0;
  r.measured = "I1 cost=" + std::to_string(one) + " (want 16), I2 cost=" + std::to_string(two) +
               " (want 12), " + fmt(secs, 4) + " s";
  return r;
}

CriterionResult c2_three_agent() {
  CriterionResult r{2, "three-agent example arithmetic", false, ""};
  const Instance inst = fixtures::three_agent_example();
  const Count b = cost(fixtures::three_agent_assignment_b(), inst);
  const Count c = cost(fixtures::three_agent_assignment_c(), inst);
  const bool balanced = is_balanced(fixtures::three_agent_assignment_b(), inst) &&
                        is_balanced(fixtures::three_agent_assignment_c(), inst);
  r.pass = b == 17 && c == 16 && balanced;
  r.measured = "(b)=" + std::to_string(b) + " (c)=" + std::to_string(c) +
               (balanced ? ", both balanced" : ", unbalanced");
  return r;
}

CriterionResult c6_equivalence(std::uint64_t seed) {
  CriterionResult r{6, "sync/async assignment equivalence", false, ""};
  const auto suite = random_suite(seed ^ 0xE0u, 120);
  int compared = 0;
  int mismatches = 0;
  std::string first;
  for (const auto& c : suite) {
    const int n = c.inst.agents();
    const DelayModel delays[] = {DelayModel::unit(), DelayModel::uniform(1, 5, c.seed),
                                 adversarial_table(n)};
    for (Variant v : {Variant::Base, Variant::TwoApprox, Variant::EpsApprox}) {
      ProtocolConfig sync_cfg;
      sync_cfg.variant = v;
      sync_cfg.seed = c.seed;
      const RunResult ref = run_protocol(c.inst, sync_cfg);
      for (const auto& d : delays) {
        ProtocolConfig async_cfg = sync_cfg;
        async_cfg.engine = EngineKind::Async;
        async_cfg.delay = d;
        const RunResult got = run_protocol(c.inst, async_cfg);
        ++compared;
        if (got.leader != ref.leader || got.assignment != ref.assignment) {
          ++mismatches;
          if (first.empty()) first = " first: n=" + std::to_string(n) + " " + d.describe();
        }
      }
    }
  }
  r.pass = mismatches == 0 && suite.size() >= 100;
  r.measured = std::to_string(suite.size()) + " instances, " + std::to_string(compared) +
               " async runs vs sync, mismatches=" + std::to_string(mismatches) + first;
  return r;
}

CriterionResult c8_cross_validation(std::uint64_t seed) {
  CriterionResult r{8, "flow oracle vs exhaustive oracle", false, ""};
  std::mt19937_64 rng(seed ^ 0x8u);
  int checked = 0;
  int mismatches = 0;
  int unbalanced = 0;
  while (checked < 600) {
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    const int m = std::uniform_int_distribution<int>(n, 8)(rng);
    if (balanced_assignment_count(n, m) > kExhaustiveGuard) continue;
    const Count p_max = std::uniform_int_distribution<int>(0, 12)(rng);
    const double density = std::uniform_real_distribution<double>(0.2, 1.0)(rng);
    const Instance inst = gen_random(n, m, p_max, density, rng());
    const Solution flow = optimal_assignment(inst);
    const Solution brute = exhaustive_optimal(inst);
    if (!is_balanced(flow.assignment, inst)) ++unbalanced;
    if (flow.cost != brute.cost) ++mismatches;
    ++checked;
  }
  r.pass = mismatches == 0 && unbalanced == 0;
  r.measured = std::to_string(checked) + " instances (n<=4, m<=8), mismatches=" +
               std::to_string(mismatches) + ", unbalanced flow outputs=" + std::to_string(unbalanced);
  return r;
}

CriterionResult c9_family(std::uint64_t seed) {
  CriterionResult r{9, "paired-family structure", false, ""};
  std::mt19937_64 rng(seed ^ 0x9u);
  int generated = 0;
  int bad = 0;
  std::string first;
  for (int k = 0; k < 30; ++k) {
    FamilySpec spec;
    spec.n = 2 * std::uniform_int_distribution<int>(1, 3)(rng);
    spec.t = 2 * std::uniform_int_distribution<int>(1, 4)(rng);
    spec.u = std::uniform_int_distribution<int>(2, 7)(rng);
    for (int b = 0; b < spec.n / 2; ++b) {
      std::vector<int> offsets(static_cast<std::size_t>(spec.t));
      for (int o = 0; o < spec.t; ++o) offsets[o] = o;
      std::shuffle(offsets.begin(), offsets.end(), rng);
      offsets.resize(static_cast<std::size_t>(spec.t / 2));
      spec.c_prime.push_back(offsets);
    }
    for (bool second : {false, true}) {
      const Instance inst = second ? gen_family_I2(spec) : gen_family_I1(spec);
      ++generated;
      const Solution s = optimal_assignment(inst);
      bool ok = verify_pair_lemma(inst);
      const int pairs = spec.n / 2;
      for (int b = 0; b < pairs; ++b) {
        const auto cp = family_c_prime(spec, b);
        for (int o = 0; o < spec.t; ++o) {
          const bool prime = std::binary_search(cp.begin(), cp.end(), o);
          // I1: C' to the first agent of the pair; I2: C' to the partner.
          const AgentIndex want = (prime != second) ? b : b + pairs;
          if (s.assignment.pi[b * spec.t + o] != want) ok = false;
        }
      }
      const Count closed = second ? family_I2_cost(inst, spec) : family_I1_cost(inst, spec);
      if (s.cost != closed) ok = false;
      if (!ok) {
        ++bad;
        if (first.empty()) {
          first = std::string(" first: ") + (second ? "I2" : "I1") + " n=" + std::to_string(spec.n) +
                  " t=" + std::to_string(spec.t) + " oracle=" + std::to_string(s.cost) +
                  " closed=" + std::to_string(closed);
        }
      }
    }
  }
  r.pass = bad == 0 && generated >= 20;
  r.measured = std::to_string(generated) + " instances, failures=" + std::to_string(bad) + first;
  return r;
}

struct ScalingPoint {
  int n;
  double median_units;
  std::int64_t max_sync_p2;
  std::int64_t max_async_p2;
  std::int64_t async_p2_bound;
  double max_c;
};

std::vector<ScalingPoint> scaling_grid(std::uint64_t seed, double& seconds) {
  const auto t0 = Clock::now();
  std::vector<ScalingPoint> out;
  for (int n : {4, 8, 16, 32}) {
    ScalingPoint pt{n, 0, 0, 0, 0, 0};
    std::vector<std::int64_t> units;
    for (int rep = 0; rep < 5; ++rep) {
      const std::uint64_t s = seed + static_cast<std::uint64_t>(n) * 101 + rep;
      const Instance inst = gen_random(n, n, 64, 1.0, s);
      const Count p = inst.max_weight();
      ProtocolConfig cfg;
      cfg.seed = s;
      const RunResult sync_run = run_balance(inst, cfg);
      units.push_back(sync_run.metrics.units_total);
      pt.max_sync_p2 = std::max(pt.max_sync_p2, sync_run.metrics.units_per_phase.at(kPhaseEstimate));
      const double logp = std::log2(static_cast<double>(std::max<Count>(p, 1)));
      pt.max_c = std::max(pt.max_c, static_cast<double>(sync_run.metrics.time_units) / (n * (logp + 2)));
      cfg.engine = EngineKind::Async;
      const RunResult async_run = run_balance(inst, cfg);
      const std::int64_t a2 = async_run.metrics.units_per_phase.at(kPhaseEstimate);
      const auto per = static_cast<std::int64_t>(
          std::ceil(std::log2(static_cast<double>(p + 1)) / std::log2(static_cast<double>(n))));
      const std::int64_t bound = 2 * n * per + 2 * n;
      if (a2 - bound > pt.max_async_p2 - pt.async_p2_bound || rep == 0) {
        pt.max_async_p2 = a2;
        pt.async_p2_bound = bound;
      }
    }
    std::sort(units.begin(), units.end());
    pt.median_units = static_cast<double>(units[2]);
    out.push_back(pt);
  }
  seconds = seconds_since(t0);
  return out;
}

CriterionResult c10_messages(const std::vector<ScalingPoint>& grid, double seconds) {
  CriterionResult r{10, "message scaling with m = n", true, ""};
  std::ostringstream s;
  s << "median units:";
  for (const auto& pt : grid) s << " n=" << pt.n << ":" << pt.median_units;
  s << "; growth:";
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double f = grid[k].median_units / grid[k - 1].median_units;
    s << " " << fmt(f, 2);
    if (f < 3.0 || f > 5.5) r.pass = false;
  }
  s << "; sync phase2 max/2n^2:";
  for (const auto& pt : grid) {
    s << " " << pt.max_sync_p2 << "/" << 2 * pt.n * pt.n;
    if (pt.max_sync_p2 > 2 * pt.n * pt.n) r.pass = false;
  }
  s << "; async phase2/bound:";
  for (const auto& pt : grid) {
    s << " " << pt.max_async_p2 << "/" << pt.async_p2_bound;
    if (pt.max_async_p2 > pt.async_p2_bound) r.pass = false;
  }
  s << "; " << fmt(seconds, 2) << " s";
  if (seconds >= 60) r.pass = false;
  r.measured = s.str();
  return r;
}

CriterionResult c11_time(const std::vector<ScalingPoint>& grid) {
  CriterionResult r{11, "synchronous time scaling", false, ""};
  double c = 0;
  std::ostringstream s;
  s << "rounds/(n(log2 p+2)):";
  for (const auto& pt : grid) {
    c = std::max(c, pt.max_c);
    s << " n=" << pt.n << ":" << fmt(pt.max_c, 2);
  }
  r.pass = c <= 10.0;
  s << "; fitted C=" << fmt(c, 2);
  r.measured = s.str();
  return r;
}

CriterionResult c12_tight() {
  CriterionResult r{12, "tight family ratio", true, ""};
  const Rational delta(9, 10), eps(1, 10);
  const double formula = to_double(tight_ratio_formula(delta, eps));
  std::ostringstream s;
  bool deviates = false;
  for (int n : {2, 4, 8}) {
    TightSpec spec;
    spec.n = n;
    spec.q = 2280;
    spec.delta = delta;
    spec.epsilon = eps;
    const Instance inst = gen_tight(spec);
    ProtocolConfig cfg;
    cfg.leader = 0;
    cfg.policy = SelectionPolicy::LowestIndexFirst;
    const RunResult run = run_balance(inst, cfg);
    const Count opt = optimal_assignment(inst).cost;
    const Ratio ratio = approximation_ratio(cost(run.assignment, inst), opt);
    const double rv = ratio.to_double();
    if (!(rv >= 2.0)) r.pass = false;
    if (std::abs(rv - formula) > 1e-9) deviates = true;
    s << "n=" << n << " ratio=" << ratio.str() << "=" << fmt(rv) << " (opt " << opt;
    s << (Rational(opt) == tight_optimal_cost(spec) ? " = closed form" : " != closed form") << "); ";
  }
  s << "formula 3-4e/(4d+e)=" << fmt(formula);
  if (deviates) {
    s << "; note: measured ratio differs from the formula. In a direct trace the color given "
         "to the zero-weight agent costs q, not q*delta";
  }
  r.measured = s.str();
  return r;
}

CriterionResult c13_determinism(std::uint64_t seed) {
  CriterionResult r{13, "bench determinism", false, ""};
  ExperimentPlan plan;
  plan.n = {2, 3, 5};
  plan.m_factor = {1, 2};
  plan.p_max = {9, 64};
  plan.density = {0.5, 1.0};
  for (const char* name : {"sync", "async", "sync:two-approx", "async:eps-approx", "sync:gather"}) {
    plan.protocols.push_back(parse_protocol(name));
  }
  plan.reps = 2;
  plan.seed = seed;
  plan.delay = "uniform:1,4";
  plan.workers = 3;
  const std::string a = render_report(run_plan(plan), "jsonl");
  const std::string b = render_report(run_plan(plan), "jsonl");
  plan.workers = 1;
  const std::string c = render_report(run_plan(plan), "jsonl");
  plan.format = "csv";
  const std::string d = render_report(run_plan(plan), "csv");
  const std::string e = render_report(run_plan(plan), "csv");
  r.pass = a == b && a == c && d == e && !a.empty();
  r.measured = std::to_string(std::count(a.begin(), a.end(), '\n')) +
               " rows; repeat identical=" + (a == b ? "yes" : "no") +
               ", 3 vs 1 workers identical=" + (a == c ? "yes" : "no") +
               ", csv identical=" + (d == e ? "yes" : "no");
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  testing::set_oracle_cost_skew(options.corrupt_oracle ? 1 : 0);
  auto wanted = [&](int id) {
    return options.only.empty() ||
           std::find(options.only.begin(), options.only.end(), id) != options.only.end();
  };
  std::vector<CriterionResult> out;
  auto guarded = [&](int id, const std::string& title, const std::function<CriterionResult()>& f) {
    if (!wanted(id)) return;
    try {
      out.push_back(f());
    } catch (const std::exception& e) {
      out.push_back(CriterionResult{id, title, false, std::string("exception: ") + e.what()});
    }
  };

  guarded(1, "oracle exactness on paired fixtures", c1_oracle_fixtures);
  guarded(2, "three-agent example arithmetic", c2_three_agent);

  if (wanted(3) || wanted(4) || wanted(5) || wanted(7)) {
    SuiteStats st;
    std::string error;
    try {
      st = run_suite(random_suite(options.seed, 1200));
    } catch (const std::exception& e) {
      error = std::string("exception: ") + e.what();
    }
    const std::string head = std::to_string(st.instances) + " instances, ";
    auto add = [&](int id, const std::string& title, bool pass, const std::string& measured) {
      if (!wanted(id)) return;
      out.push_back(CriterionResult{id, title, error.empty() && pass, error.empty() ? measured : error});
    };
    add(3, "feasibility suite", st.infeasible == 0 && st.instances >= 1000,
        head + std::to_string(st.runs) + " runs, failures=" + std::to_string(st.infeasible) +
            (st.first_failure.empty() ? "" : " first: " + st.first_failure) + ", " +
            fmt(st.seconds, 2) + " s");
    add(4, "3-approximation", st.base_violations == 0,
        std::to_string(st.positive_opt) + " instances with positive optimum, violations=" +
            std::to_string(st.base_violations) + ", max ratio=" + fmt(st.base_max) +
            "; against the label-quota optimum: violations=" +
            std::to_string(st.base_quota_violations));
    add(5, "variant ratios",
        st.two_violations == 0 && st.eps_violations == 0 && st.gather_mismatch == 0,
        "two-approx max=" + fmt(st.two_max) + " violations=" + std::to_string(st.two_violations) +
            "; eps(1/2) max=" + fmt(st.eps_max) + " violations=" + std::to_string(st.eps_violations) +
            "; gather != oracle: " + std::to_string(st.gather_mismatch) +
            "; against the label-quota optimum: two-approx violations=" +
            std::to_string(st.two_quota_violations) +
            " eps violations=" + std::to_string(st.eps_quota_violations));
    add(7, "estimate sandwich", st.estimate_failures == 0 && st.estimate_cases > 0,
        std::to_string(st.estimate_cases) + " instances with p>=1, failures=" +
            std::to_string(st.estimate_failures));
  }
  guarded(6, "sync/async assignment equivalence", [&] { return c6_equivalence(options.seed); });
  guarded(8, "flow oracle vs exhaustive oracle", [&] { return c8_cross_validation(options.seed); });
  guarded(9, "paired-family structure", [&] { return c9_family(options.seed); });
  if (wanted(10) || wanted(11)) {
    double seconds = 0;
    std::vector<ScalingPoint> grid;
    std::string error;
    try {
      grid = scaling_grid(options.seed, seconds);
    } catch (const std::exception& e) {
      error = std::string("exception: ") + e.what();
    }
    if (!error.empty()) {
      if (wanted(10)) out.push_back({10, "message scaling with m = n", false, error});
      if (wanted(11)) out.push_back({11, "synchronous time scaling", false, error});
    } else {
      if (wanted(10)) out.push_back(c10_messages(grid, seconds));
      if (wanted(11)) out.push_back(c11_time(grid));
    }
  }
  guarded(12, "tight family ratio", c12_tight);
  guarded(13, "bench determinism", [&] { return c13_determinism(options.seed); });
  testing::set_oracle_cost_skew(0);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

std::string format_results(const std::vector<CriterionResult>& results) {
  std::ostringstream s;
  int failed = 0;
  for (const auto& r : results) {
    s << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.title << ": " << r.measured
      << "\n";
    if (!r.pass) ++failed;
  }
  s << (failed == 0 ? "all " + std::to_string(results.size()) + " criteria passed"
                    : std::to_string(failed) + " of " + std::to_string(results.size()) +
                          " criteria failed")
    << "\n";
  return s.str();
}

Json results_json(const std::vector<CriterionResult>& results) {
  Json arr = Json::array();
  bool all = true;
  for (const auto& r : results) {
    arr.push_back(Json{{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"measured", r.measured}});
    all = all && r.pass;
  }
  return Json{{"pass", all}, {"criteria", arr}};
}

}  // namespace ringbalance

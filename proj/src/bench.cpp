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

#include "ringbalance/bench.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <sstream>
#include <thread>

#include "ringbalance/instances.hpp"
#include "ringbalance/oracle.hpp"
#include "ringbalance/variants.hpp"

namespace ringbalance {

ProtocolChoice parse_protocol(const std::string& name) {
  ProtocolChoice c;
  c.name = name;
  const auto colon = name.find(':');
  const std::string engine = name.substr(0, colon);
  const std::string variant = colon == std::string::npos ? "balance" : name.substr(colon + 1);
  if (engine == "sync") {
    c.engine = EngineKind::Sync;
  } else if (engine == "async") {
    c.engine = EngineKind::Async;
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown engine in protocol '" + name + "'");
  }
  if (variant == "balance") {
    c.variant = Variant::Base;
  } else if (variant == "two-approx") {
    c.variant = Variant::TwoApprox;
  } else if (variant == "eps-approx") {
    c.variant = Variant::EpsApprox;
  } else if (variant == "gather") {
    c.variant = Variant::Gather;
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown variant in protocol '" + name + "'");
  }
  return c;
}

ExperimentPlan plan_from_json(const Json& j) {
  ExperimentPlan p;
  try {
    p.n = j.at("n").get<std::vector<int>>();
    p.m = j.value("m", std::vector<int>{});
    p.m_factor = j.value("m_factor", std::vector<int>{});
    p.p_max = j.at("p_max").get<std::vector<Count>>();
    p.density = j.value("density", std::vector<double>{1.0});
    for (const auto& name : j.value("protocols", std::vector<std::string>{"sync"})) {
      p.protocols.push_back(parse_protocol(name));
    }
    p.reps = j.value("reps", 1);
    p.seed = j.value("seed", std::uint64_t{1});
    p.workers = std::max(1, j.value("workers", 1));
    p.format = j.value("format", std::string("jsonl"));
    p.output = j.value("output", std::string());
    p.with_oracle = j.value("with_oracle", true);
    p.emit_assignments = j.value("emit_assignments", false);
    const std::string policy = j.value("policy", std::string("highest-weight"));
    if (policy == "highest-weight") {
      p.policy = SelectionPolicy::HighestWeightFirst;
    } else if (policy == "lowest-index") {
      p.policy = SelectionPolicy::LowestIndexFirst;
    } else {
      throw Error(ErrorCode::InvalidConfig, "unknown policy " + policy);
    }
    if (j.contains("epsilon")) {
      p.epsilon = parse_rational(j["epsilon"].is_string() ? j["epsilon"].get<std::string>()
                                                          : j["epsilon"].dump());
    }
    p.delay = j.value("delay", std::string("unit"));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("plan: ") + e.what());
  }
  if (p.reps < 1) throw Error(ErrorCode::InvalidConfig, "reps must be >= 1");
  if (p.format != "jsonl" && p.format != "csv") {
    throw Error(ErrorCode::InvalidConfig, "format must be jsonl or csv");
  }
  if (p.n.empty() || p.p_max.empty() || p.density.empty() || p.protocols.empty()) {
    throw Error(ErrorCode::InvalidConfig, "empty grid axis");
  }
  for (int n : p.n) {
    if (n < 1) throw Error(ErrorCode::InvalidConfig, "n must be >= 1");
    for (int m : p.m) {
      if (m < n) throw Error(ErrorCode::InvalidConfig, "grid point with m < n");
    }
  }
  for (int f : p.m_factor) {
    if (f < 1) throw Error(ErrorCode::InvalidConfig, "m_factor must be >= 1");
  }
  return p;
}

namespace {

struct Job {
  int n;
  int m;
  Count p_max;
  double density;
  int rep;
  std::uint64_t seed;
  std::size_t protocol;
};

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::vector<Job> expand(const ExperimentPlan& plan) {
  std::vector<Job> jobs;
  std::uint64_t point = 0;
  for (int n : plan.n) {
    std::vector<int> ms = plan.m;
    for (int f : plan.m_factor) ms.push_back(f * n);
    if (ms.empty()) ms.push_back(n);
    for (int m : ms) {
      for (Count p_max : plan.p_max) {
        for (double density : plan.density) {
          for (int rep = 0; rep < plan.reps; ++rep) {
            const std::uint64_t seed = mix(plan.seed ^ mix(point * 1000003ULL + rep));
            for (std::size_t k = 0; k < plan.protocols.size(); ++k) {
              jobs.push_back(Job{n, m, p_max, density, rep, seed, k});
            }
          }
          ++point;
        }
      }
    }
  }
  return jobs;
}

ReportRow run_job(const ExperimentPlan& plan, const Job& job) {
  const Instance inst = gen_random(job.n, job.m, job.p_max, job.density, job.seed);
  const ProtocolChoice& choice = plan.protocols[job.protocol];
  ProtocolConfig config;
  config.engine = choice.engine;
  config.variant = choice.variant;
  config.policy = plan.policy;
  config.seed = job.seed;
  config.epsilon = plan.epsilon;
  config.delay = parse_delay(plan.delay, job.seed);
  const RunResult run = run_protocol(inst, config);

  ReportRow row;
  row.n = job.n;
  row.m = job.m;
  row.p_max = job.p_max;
  row.density = job.density;
  row.rep = job.rep;
  row.seed = job.seed;
  row.protocol = choice.name;
  row.p = inst.max_weight();
  row.p_hat = choice.variant == Variant::Gather ? 0 : run.estimate.p_hat;
  row.cost = cost(run.assignment, inst);
  row.balanced = is_balanced(run.assignment, inst);
  if (plan.with_oracle) {
    row.oracle_cost = optimal_assignment(inst).cost;
    row.ratio = approximation_ratio(row.cost, *row.oracle_cost);
  }
  row.units_total = run.metrics.units_total;
  row.units_per_phase = run.metrics.units_per_phase;
  row.time_units = run.metrics.time_units;
  row.stages = static_cast<int>(run.metrics.stages.size());
  if (plan.emit_assignments) row.assignment = run.assignment;
  return row;
}

std::string density_text(double d) {
  std::ostringstream s;
  s << d;
  return s.str();
}

std::int64_t phase_units(const ReportRow& row, const char* phase) {
  auto it = row.units_per_phase.find(phase);
  return it == row.units_per_phase.end() ? 0 : it->second;
}

}  // namespace

std::vector<ReportRow> run_plan(const ExperimentPlan& plan) {
  const std::vector<Job> jobs = expand(plan);
  std::vector<ReportRow> rows(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      try {
        rows[k] = run_job(plan, jobs[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int count = std::min<int>(plan.workers, static_cast<int>(std::max<std::size_t>(1, jobs.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < count; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

std::string csv_header() {
  return "n,m,p_max,density,rep,seed,protocol,p,p_hat,cost,oracle_cost,ratio,balanced,"
         "units_total,units_phase1,units_phase2,units_phase3,units_gather,time_units,stages";
}

std::string to_csv(const ReportRow& r) {
  std::ostringstream s;
  s << r.n << ',' << r.m << ',' << r.p_max << ',' << density_text(r.density) << ',' << r.rep << ','
    << r.seed << ',' << r.protocol << ',' << r.p << ',' << r.p_hat << ',' << r.cost << ',';
  if (r.oracle_cost) s << *r.oracle_cost;
  s << ',';
  if (r.ratio) s << r.ratio->str();
  s << ',' << (r.balanced ? 1 : 0) << ',' << r.units_total << ','
    << phase_units(r, kPhaseElection) << ',' << phase_units(r, kPhaseEstimate) << ','
    << phase_units(r, kPhaseAssign) << ',' << phase_units(r, kPhaseGather) << ',' << r.time_units
    << ',' << r.stages;
  return s.str();
}

Json row_to_json(const ReportRow& r) {
  Json j;
  j["n"] = r.n;
  j["m"] = r.m;
  j["p_max"] = r.p_max;
  j["density"] = r.density;
  j["rep"] = r.rep;
  j["seed"] = r.seed;
  j["protocol"] = r.protocol;
  j["p"] = r.p;
  j["p_hat"] = r.p_hat;
  j["cost"] = r.cost;
  if (r.oracle_cost) {
    j["oracle_cost"] = *r.oracle_cost;
    j["ratio"] = r.ratio->str();
  }
  j["balanced"] = r.balanced;
  j["units_total"] = r.units_total;
  j["units_per_phase"] = r.units_per_phase;
  j["time_units"] = r.time_units;
  j["stages"] = r.stages;
  if (r.assignment) j["assignment"] = r.assignment->pi;
  return j;
}

std::string render_report(const std::vector<ReportRow>& rows, const std::string& format) {
  std::string out;
  if (format == "csv") {
    out += csv_header() + "\n";
    for (const auto& r : rows) out += to_csv(r) + "\n";
  } else {
    for (const auto& r : rows) out += row_to_json(r).dump() + "\n";
  }
  return out;
}

Json aggregate(const std::vector<ReportRow>& rows) {
  struct Key {
    int n, m;
    Count p_max;
    double density;
    std::string protocol;
    bool operator==(const Key&) const = default;
  };
  std::vector<Key> keys;
  std::vector<std::vector<const ReportRow*>> groups;
  for (const auto& r : rows) {
    Key k{r.n, r.m, r.p_max, r.density, r.protocol};
    auto it = std::find(keys.begin(), keys.end(), k);
    if (it == keys.end()) {
      keys.push_back(k);
      groups.emplace_back();
      it = keys.end() - 1;
    }
    groups[static_cast<std::size_t>(it - keys.begin())].push_back(&r);
  }
  auto median = [](std::vector<std::int64_t> v) {
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? static_cast<double>(v[h]) : (v[h - 1] + v[h]) / 2.0;
  };
  Json out = Json::array();
  for (std::size_t g = 0; g < keys.size(); ++g) {
    std::vector<std::int64_t> units, time;
    double max_ratio = 0;
    for (const auto* r : groups[g]) {
      units.push_back(r->units_total);
      time.push_back(r->time_units);
      if (r->ratio && !r->ratio->infinite) max_ratio = std::max(max_ratio, r->ratio->to_double());
    }
    out.push_back(Json{{"n", keys[g].n},
                       {"m", keys[g].m},
                       {"p_max", keys[g].p_max},
                       {"density", keys[g].density},
                       {"protocol", keys[g].protocol},
                       {"runs", groups[g].size()},
                       {"median_units", median(units)},
                       {"median_time", median(time)},
                       {"max_ratio", max_ratio}});
  }
  return out;
}

}  // namespace ringbalance

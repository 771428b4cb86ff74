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

// ringbalance: gen | run | oracle | bench | verify.
// Exit status 0 on success, 1 when a verification fails, 2 on bad usage.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ringbalance/acceptance.hpp"
#include "ringbalance/bench.hpp"
#include "ringbalance/instances.hpp"
#include "ringbalance/io.hpp"
#include "ringbalance/oracle.hpp"
#include "ringbalance/variants.hpp"

namespace {

using namespace ringbalance;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Globals {
  std::uint64_t seed = 1;
  std::optional<int> leader;
  std::string policy = "highest-weight";
  std::string delay = "unit";
  std::string trace;
};

struct GenArgs {
  std::string family = "random";
  int n = 4;
  int m = 0;
  Count p_max = 64;
  double density = 1.0;
  int t = 8;
  Count u = 2;
  std::vector<int> c_prime;
  Count q = 2280;
  std::string delta = "9/10";
  std::string epsilon = "1/10";
  bool no_interval_check = false;
  std::string out;
};

struct RunArgs {
  std::string instance;
  std::string protocol = "sync";
  std::string variant = "balance";
  std::string epsilon = "1/2";
  bool with_oracle = false;
};

struct OracleArgs {
  std::string instance;
  std::string method = "flow";
};

struct BenchArgs {
  std::string plan;
  std::string format;
  std::string out;
  int workers = 0;
  bool aggregate = false;
  bool emit_assignments = false;
};

struct VerifyArgs {
  bool json = false;
  bool corrupt_oracle = false;
  std::vector<int> only;
};

SelectionPolicy parse_policy(const std::string& s) {
  if (s == "highest-weight") return SelectionPolicy::HighestWeightFirst;
  if (s == "lowest-index") return SelectionPolicy::LowestIndexFirst;
  throw Error(ErrorCode::InvalidConfig, "unknown policy " + s);
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

int cmd_gen(const GenArgs& a, const Globals& g) {
  Instance inst(1, 1, {0});
  Json meta{{"family", a.family}};
  if (a.family == "random") {
    const int m = a.m > 0 ? a.m : a.n;
    inst = gen_random(a.n, m, a.p_max, a.density, g.seed);
    meta["p_max"] = a.p_max;
    meta["density"] = a.density;
    meta["seed"] = g.seed;
  } else if (a.family == "i1" || a.family == "i2") {
    FamilySpec spec;
    spec.n = a.n;
    spec.t = a.t;
    spec.u = a.u;
    if (a.c_prime.empty()) {
      std::vector<int> even;
      for (int o = 0; o < a.t; o += 2) even.push_back(o);
      spec.c_prime = {even};
    } else {
      spec.c_prime = {a.c_prime};
    }
    inst = a.family == "i1" ? gen_family_I1(spec) : gen_family_I2(spec);
    meta["t"] = a.t;
    meta["u"] = a.u;
    meta["c_prime"] = spec.c_prime[0];
  } else if (a.family == "tight") {
    TightSpec spec;
    spec.n = a.n;
    spec.q = a.q;
    spec.delta = parse_rational(a.delta);
    spec.epsilon = parse_rational(a.epsilon);
    spec.require_same_interval = !a.no_interval_check;
    inst = gen_tight(spec);
    meta["q"] = a.q;
    meta["delta"] = to_string(spec.delta);
    meta["epsilon"] = to_string(spec.epsilon);
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown family " + a.family);
  }
  emit(instance_to_json(inst, meta).dump() + "\n", a.out);
  return kExitOk;
}

ProtocolConfig config_from(const Globals& g, std::uint64_t delay_seed) {
  ProtocolConfig cfg;
  cfg.seed = g.seed;
  cfg.policy = parse_policy(g.policy);
  cfg.leader = g.leader;
  cfg.delay = parse_delay(g.delay, delay_seed);
  return cfg;
}

int cmd_run(const RunArgs& a, const Globals& g) {
  const Instance inst = read_instance(a.instance);
  ProtocolConfig cfg = config_from(g, g.seed);
  const ProtocolChoice choice = parse_protocol(a.protocol + ":" + a.variant);
  cfg.engine = choice.engine;
  cfg.variant = choice.variant;
  cfg.epsilon = parse_rational(a.epsilon);
  if (cfg.leader && (*cfg.leader < 0 || *cfg.leader >= inst.agents())) {
    throw Error(ErrorCode::InvalidConfig, "leader out of range");
  }
  std::unique_ptr<std::ofstream> trace_file;
  if (!g.trace.empty()) {
    if (g.trace == "-") {
      cfg.trace = jsonl_trace(std::cerr);
    } else {
      trace_file = std::make_unique<std::ofstream>(g.trace);
      if (!*trace_file) throw Error(ErrorCode::IoError, "cannot write " + g.trace);
      cfg.trace = jsonl_trace(*trace_file);
    }
  }
  const RunResult run = run_protocol(inst, cfg);
  std::optional<Solution> oracle;
  if (a.with_oracle) oracle = optimal_assignment(inst);
  std::cout << report_json(run, inst, cfg, oracle).dump() << "\n";
  return is_balanced(run.assignment, inst) ? kExitOk : kExitFailed;
}

int cmd_oracle(const OracleArgs& a) {
  const Instance inst = read_instance(a.instance);
  Solution s;
  if (a.method == "flow") {
    s = optimal_assignment(inst);
  } else if (a.method == "exhaustive") {
    s = exhaustive_optimal(inst);
  } else if (a.method == "hungarian") {
    s = hungarian_optimal(inst);
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown method " + a.method);
  }
  std::cout << Json{{"cost", s.cost}, {"pi", s.assignment.pi}}.dump() << "\n";
  return kExitOk;
}

int cmd_bench(const BenchArgs& a, const Globals& g) {
  ExperimentPlan plan = plan_from_json(read_json_file(a.plan));
  if (!a.format.empty()) plan.format = a.format;
  if (plan.format != "jsonl" && plan.format != "csv") {
    throw Error(ErrorCode::InvalidConfig, "format must be jsonl or csv");
  }
  if (!a.out.empty()) plan.output = a.out;
  if (a.workers > 0) plan.workers = a.workers;
  if (a.emit_assignments) plan.emit_assignments = true;
  plan.policy = parse_policy(g.policy);
  if (g.delay != "unit") plan.delay = g.delay;
  const auto rows = run_plan(plan);
  std::string text;
  if (a.aggregate) {
    for (const auto& row : aggregate(rows)) text += row.dump() + "\n";
  } else {
    text = render_report(rows, plan.format);
  }
  emit(text, plan.output);
  for (const auto& row : rows) {
    if (!row.balanced) return kExitFailed;
  }
  return kExitOk;
}

int cmd_verify(const VerifyArgs& a, const Globals& g) {
  AcceptanceOptions opts;
  opts.corrupt_oracle = a.corrupt_oracle;
  opts.only = a.only;
  if (g.seed != 1) opts.seed = g.seed;
  const auto results = run_acceptance(opts);
  if (a.json) {
    std::cout << results_json(results).dump(2) << "\n";
  } else {
    std::cout << format_results(results);
  }
  for (const auto& r : results) {
    if (!r.pass) return kExitFailed;
  }
  return kExitOk;
}

bool usage_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::IoError:
    case ErrorCode::ParseError:
    case ErrorCode::BadParams:
    case ErrorCode::BadSpec:
    case ErrorCode::InvalidEpsilon:
    case ErrorCode::NonIntegralWeights:
    case ErrorCode::IntervalConditionUnsatisfiable:
    case ErrorCode::NegativeCount:
    case ErrorCode::FewerColorsThanAgents:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::DuplicateIds:
    case ErrorCode::TooLarge:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balanced color assignment on simulated rings"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "seed for generators, ids and random delays");
  app.add_option("--leader", g.leader, "agent forced to win the election");
  app.add_option("--policy", g.policy, "highest-weight | lowest-index")
      ->check(CLI::IsMember({"highest-weight", "lowest-index"}));
  app.add_option("--delay", g.delay, "unit | uniform:lo,hi | table:file");
  app.add_option("--trace", g.trace, "write message events as JSON lines to this file (- for stderr)");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "write an instance");
  gen_cmd->add_option("--family", gen.family, "random | i1 | i2 | tight")
      ->check(CLI::IsMember({"random", "i1", "i2", "tight"}));
  gen_cmd->add_option("--n", gen.n, "agents");
  gen_cmd->add_option("--m", gen.m, "colors (random; default n)");
  gen_cmd->add_option("--p-max", gen.p_max, "largest count (random)");
  gen_cmd->add_option("--density", gen.density, "fraction of nonzero counts (random)");
  gen_cmd->add_option("--t", gen.t, "colors per pair (i1, i2)");
  gen_cmd->add_option("--u", gen.u, "base count (i1, i2)");
  gen_cmd->add_option("--c-prime", gen.c_prime, "block offsets of C' from 0 (i1, i2)")->delimiter(',');
  gen_cmd->add_option("--q", gen.q, "scale (tight)");
  gen_cmd->add_option("--delta", gen.delta, "delta as a rational (tight)");
  gen_cmd->add_option("--eps", gen.epsilon, "epsilon as a rational (tight)");
  gen_cmd->add_flag("--no-interval-check", gen.no_interval_check, "skip the same-stage check (tight)");
  gen_cmd->add_option("--out", gen.out, "output file (default standard output)");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "run a protocol on an instance file");
  run_cmd->add_option("instance", run.instance)->required();
  run_cmd->add_option("--protocol", run.protocol, "sync | async")
      ->check(CLI::IsMember({"sync", "async"}));
  run_cmd->add_option("--variant", run.variant, "balance | two-approx | eps-approx | gather")
      ->check(CLI::IsMember({"balance", "two-approx", "eps-approx", "gather"}));
  run_cmd->add_option("--epsilon", run.epsilon, "shrink factor minus one for eps-approx");
  run_cmd->add_flag("--with-oracle", run.with_oracle, "add the optimal cost and the ratio");

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "solve an instance file exactly");
  oracle_cmd->add_option("instance", oracle.instance)->required();
  oracle_cmd->add_option("--method", oracle.method, "flow | exhaustive | hungarian")
      ->check(CLI::IsMember({"flow", "exhaustive", "hungarian"}));

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "run an experiment plan");
  bench_cmd->add_option("plan", bench.plan)->required();
  bench_cmd->add_option("--format", bench.format, "jsonl | csv")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  bench_cmd->add_option("--out", bench.out, "output file");
  bench_cmd->add_option("--workers", bench.workers, "parallel workers");
  bench_cmd->add_flag("--aggregate", bench.aggregate, "medians per grid point instead of rows");
  bench_cmd->add_flag("--emit-assignments", bench.emit_assignments, "include assignments");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance criteria");
  verify_cmd->add_flag("--json", verify.json, "machine-readable results");
  verify_cmd->add_option("--only", verify.only, "criterion ids")->delimiter(',');
  verify_cmd->add_flag("--corrupt-oracle", verify.corrupt_oracle, "skew oracle costs (harness check)")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, g);
    if (*run_cmd) return cmd_run(run, g);
    if (*oracle_cmd) return cmd_oracle(oracle);
    if (*bench_cmd) return cmd_bench(bench, g);
    if (*verify_cmd) return cmd_verify(verify, g);
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return usage_error(e.code()) ? kExitUsage : kExitFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitUsage;
}

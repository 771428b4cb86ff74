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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "ringbalance/fixtures.hpp"
#include "ringbalance/instances.hpp"
#include "ringbalance/oracle.hpp"
#include "ringbalance/variants.hpp"

using namespace ringbalance;

namespace {

Instance diagonal(const std::vector<Count>& p) {
  const int n = static_cast<int>(p.size());
  std::vector<std::vector<Count>> rows(p.size(), std::vector<Count>(p.size(), 0));
  for (int i = 0; i < n; ++i) rows[i][i] = p[i];
  return Instance::from_rows(n, rows);
}

std::vector<int> identity_labels(int n) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  std::iota(labels.begin(), labels.end(), 0);
  return labels;
}

ProtocolConfig config(EngineKind engine, Variant variant = Variant::Base) {
  ProtocolConfig cfg;
  cfg.engine = engine;
  cfg.variant = variant;
  return cfg;
}

// Centralized greedy with the same schedule, labels and policy: agents in
// ring order take their heaviest unclaimed in-interval colors up to quota.
Assignment reference_greedy(const Instance& inst, const RunResult& run, SelectionPolicy policy) {
  const int n = inst.agents();
  const int m = inst.colors();
  std::vector<AgentIndex> agent_of_label(static_cast<std::size_t>(n));
  for (AgentIndex i = 0; i < n; ++i) agent_of_label[run.labels[i]] = i;
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  Assignment a{std::vector<AgentIndex>(static_cast<std::size_t>(m), -1)};
  for (const auto& iv : run.schedule) {
    for (int label = 0; label < n; ++label) {
      const AgentIndex i = agent_of_label[label];
      std::vector<ColorIndex> open;
      for (ColorIndex j = 0; j < m; ++j) {
        if (a.pi[j] < 0 && iv.contains(inst(j, i))) open.push_back(j);
      }
      if (policy == SelectionPolicy::HighestWeightFirst) {
        std::stable_sort(open.begin(), open.end(),
                         [&](ColorIndex x, ColorIndex y) { return inst(x, i) > inst(y, i); });
      }
      for (ColorIndex j : open) {
        if (degree[label] >= quota(label, n, m)) break;
        a.pi[j] = i;
        ++degree[label];
      }
    }
  }
  return a;
}

}  // namespace

TEST_CASE("leader election") {
  ProtocolConfig cfg;
  for (EngineKind engine : {EngineKind::Sync, EngineKind::Async}) {
    cfg.engine = engine;
    const std::vector<std::uint64_t> ids{3, 1, 2};
    MessageAccounting acct(3);
    const auto e = leader_elect(ids, cfg, acct);
    CHECK(e.leader == 0);
    CHECK(e.labels == std::vector<int>{0, 1, 2});

    const std::vector<std::uint64_t> shifted{1, 2, 3};
    MessageAccounting acct2(3);
    const auto f = leader_elect(shifted, cfg, acct2);
    CHECK(f.leader == 2);
    CHECK(f.labels == std::vector<int>{1, 2, 0});

    const std::vector<std::uint64_t> one{9};
    MessageAccounting acct1(1);
    CHECK(leader_elect(one, cfg, acct1).leader == 0);
    CHECK(acct1.total_units() == 0);

    const std::vector<std::uint64_t> dup{4, 4, 1};
    MessageAccounting acct3(3);
    try {
      leader_elect(dup, cfg, acct3);
      FAIL("expected DuplicateIds");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::DuplicateIds);
    }
  }
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    cfg.engine = EngineKind::Sync;
    cfg.seed = seed;
    const auto ids = election_ids(8, cfg);
    MessageAccounting acct(8);
    const auto e = leader_elect(ids, cfg, acct);
    CHECK(acct.total_units() <= 320);
    CHECK(ids[e.leader] == *std::max_element(ids.begin(), ids.end()));
  }
}

TEST_CASE("forced leader") {
  ProtocolConfig cfg;
  cfg.leader = 3;
  const auto ids = election_ids(6, cfg);
  CHECK(ids[3] == *std::max_element(ids.begin(), ids.end()));
}

TEST_CASE("speak_up") {
  CHECK(speak_up(0, 0));
  CHECK(speak_up(1, 0));
  CHECK(speak_up(5, 2));
  CHECK_FALSE(speak_up(5, 1));
  CHECK_FALSE(speak_up(0, 1));
}

TEST_CASE("phase two, synchronous") {
  const auto labels = identity_labels(3);
  ProtocolConfig cfg;
  {
    MessageAccounting acct(3);
    const auto e = phase2_sync(diagonal({1, 4, 5}), labels, cfg, acct);
    CHECK(e.ell == 2);
    CHECK(e.p_hat == 8);
    CHECK(e.speak_stage == std::vector<int>{0, 2, 2});
    CHECK(e.speak_count == std::vector<int>{1, 1, 1});
    CHECK(acct.total_units() <= 2 * 3 * 3);
  }
  {
    MessageAccounting acct(3);
    const auto e = phase2_sync(diagonal({0, 0, 0}), labels, cfg, acct);
    CHECK(e.ell == 0);
    CHECK(e.p_hat == 2);
  }
  {
    MessageAccounting acct(2);
    const auto e = phase2_sync(fixtures::example_two(), identity_labels(2), cfg, acct);
    CHECK(e.ell == 1);
    CHECK(e.p_hat == 4);
  }
}

TEST_CASE("phase two, asynchronous") {
  ProtocolConfig cfg;
  cfg.engine = EngineKind::Async;
  cfg.delay = DelayModel::uniform(1, 4, 3);
  {
    MessageAccounting acct(3);
    const auto e = phase2_async(diagonal({1, 4, 5}), identity_labels(3), cfg, acct);
    REQUIRE(e.p_observed);
    CHECK(*e.p_observed == 5);
    CHECK(e.p_hat == 8);
  }
  {
    MessageAccounting acct(3);
    const auto e = phase2_async(diagonal({0, 0, 0}), identity_labels(3), cfg, acct);
    CHECK(*e.p_observed == 0);
    CHECK(e.p_hat == 2);
    CHECK(stage_intervals(e.p_hat, Rational(2)).size() == 2);
  }
  {
    MessageAccounting acct(2);
    phase2_async(fixtures::example_two(), identity_labels(2), cfg, acct);
    CHECK(acct.messages() == 4);
  }
}

TEST_CASE("two-agent paired fixture trace") {
  const Instance inst = fixtures::example_two();
  for (EngineKind engine : {EngineKind::Sync, EngineKind::Async}) {
    ProtocolConfig cfg = config(engine);
    cfg.leader = 0;
    const RunResult run = run_balance(inst, cfg);
    CHECK(run.leader == 0);
    CHECK(run.estimate.p_hat == 4);
    REQUIRE(run.schedule.size() == 3);
    CHECK(run.schedule[0].lo == 2);
    CHECK(run.schedule[1].lo == 1);
    CHECK(run.schedule[2].lo == 0);
    CHECK(run.assignment.pi == std::vector<AgentIndex>{0, 0, 0, 0, 1, 1, 1, 1});
    CHECK(run.stage_of_color == std::vector<int>{0, 0, 0, 0, 0, 1, 1, 0});
    CHECK(cost(run.assignment, inst) == 14);
    CHECK(approximation_ratio(14, optimal_assignment(inst).cost).value == Rational(7, 6));
    REQUIRE(!run.metrics.stages.empty());
    CHECK(run.metrics.stages[0].colors_assigned == 6);
  }
}

TEST_CASE("silent stages") {
  // p = 8: stages [4,8) and [2,4) have no candidates.
  const Instance inst = Instance::from_rows(2, {{8, 0}, {0, 1}});
  ProtocolConfig cfg;
  cfg.leader = 0;
  const RunResult sync = run_balance(inst, cfg);
  CHECK(cost(sync.assignment, inst) == 0);
  int silent = 0;
  for (const auto& s : sync.metrics.stages) {
    if (!s.step_two) {
      CHECK(s.units == 0);
      ++silent;
    }
  }
  CHECK(silent == 2);

  cfg.engine = EngineKind::Async;
  const RunResult async = run_balance(inst, cfg);
  CHECK(async.assignment == sync.assignment);
  for (const auto& s : async.metrics.stages) {
    if (!s.step_two) CHECK(s.units == 2 * 2 - 1);
  }
}

TEST_CASE("single agent") {
  const Instance inst(1, 3, {4, 0, 2});
  for (Variant v : {Variant::Base, Variant::TwoApprox, Variant::EpsApprox, Variant::Gather}) {
    for (EngineKind engine : {EngineKind::Sync, EngineKind::Async}) {
      const RunResult run = run_protocol(inst, config(engine, v));
      CHECK(run.assignment.pi == std::vector<AgentIndex>{0, 0, 0});
      CHECK(run.metrics.units_total == 0);
    }
  }
  const RunResult one = run_protocol(Instance(1, 1, {0}), ProtocolConfig{});
  CHECK(one.assignment.pi == std::vector<AgentIndex>{0});
}

TEST_CASE("own colors cost nothing") {
  const Instance inst = Instance::from_rows(3, {{6, 0, 0}, {0, 3, 0}, {0, 0, 9}, {0, 0, 1}});
  for (EngineKind engine : {EngineKind::Sync, EngineKind::Async}) {
    ProtocolConfig cfg = config(engine);
    cfg.leader = 0;
    CHECK(cost(run_balance(inst, cfg).assignment, inst) == 0);
  }
}

TEST_CASE("two-approx picks the heaviest holder") {
  // Both agents hold color 0 with weights 5 and 7 inside [4, 8).
  const Instance inst = Instance::from_rows(2, {{5, 7}, {0, 0}});
  ProtocolConfig cfg = config(EngineKind::Sync, Variant::TwoApprox);
  cfg.leader = 0;
  CHECK(run_protocol(inst, cfg).assignment.pi[0] == 1);
  cfg.engine = EngineKind::Async;
  CHECK(run_protocol(inst, cfg).assignment.pi[0] == 1);

  // Agent 1 is full after color 0, so color 1 falls to agent 0.
  const Instance full = Instance::from_rows(2, {{5, 7}, {4, 6}});
  cfg.engine = EngineKind::Sync;
  const RunResult run = run_protocol(full, cfg);
  CHECK(run.assignment.pi == std::vector<AgentIndex>{1, 0});
  CHECK(is_balanced(run.assignment, full));
}

TEST_CASE("eps-approx uses a finer schedule") {
  const Instance inst = gen_random(3, 7, 7, 1.0, 11);
  ProtocolConfig cfg;
  cfg.leader = 0;
  const RunResult base = run_balance(inst, cfg);
  const RunResult eps = run_eps_approx(inst, Rational(1, 2), cfg);
  CHECK(base.schedule.size() == 4);
  CHECK(eps.schedule.size() > base.schedule.size());
  CHECK(is_balanced(eps.assignment, inst));
  for (const char* bad : {"0", "1", "3/2", "-1/2"}) {
    try {
      run_eps_approx(inst, parse_rational(bad), cfg);
      FAIL("expected InvalidEpsilon");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidEpsilon);
    }
  }
}

TEST_CASE("gather baseline is optimal") {
  const Instance inst = fixtures::example_two();
  for (EngineKind engine : {EngineKind::Sync, EngineKind::Async}) {
    const RunResult run = run_gather_baseline(inst, config(engine, Variant::Gather));
    CHECK(cost(run.assignment, inst) == 12);
    CHECK(run.metrics.units_per_phase.count(kPhaseGather) == 1);
  }
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Instance r = gen_random(1 + seed % 5, 6, 20, 0.6, seed);
    const RunResult run = run_gather_baseline(r, config(EngineKind::Sync, Variant::Gather));
    CHECK(cost(run.assignment, r) == optimal_assignment(r).cost);
  }
}

TEST_CASE("matches a centralized greedy") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const int n = 1 + static_cast<int>(seed % 7);
    const int m = n + static_cast<int>((seed / 7) % 9);
    const Instance inst = gen_random(n, m, seed % 4 == 0 ? 1 : 40, seed % 2 ? 0.3 : 1.0, seed);
    for (SelectionPolicy policy :
         {SelectionPolicy::HighestWeightFirst, SelectionPolicy::LowestIndexFirst}) {
      ProtocolConfig cfg;
      cfg.seed = seed;
      cfg.policy = policy;
      const RunResult run = run_balance(inst, cfg);
      REQUIRE(is_balanced(run.assignment, inst));
      CHECK(run.assignment == reference_greedy(inst, run, policy));
    }
  }
}

TEST_CASE("sync and async agree, accounting adds up") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const int n = 2 + static_cast<int>(seed % 6);
    const Instance inst = gen_random(n, n + static_cast<int>(seed % 5), 30, 0.7, seed);
    for (Variant v : {Variant::Base, Variant::TwoApprox, Variant::EpsApprox}) {
      ProtocolConfig cfg = config(EngineKind::Sync, v);
      cfg.seed = seed;
      const RunResult sync = run_protocol(inst, cfg);
      cfg.engine = EngineKind::Async;
      cfg.delay = DelayModel::uniform(1, 5, seed);
      const RunResult async = run_protocol(inst, cfg);
      CHECK(sync.assignment == async.assignment);
      CHECK(sync.leader == async.leader);

      for (const RunResult* run : {&sync, &async}) {
        std::int64_t phases = 0;
        for (const auto& [name, units] : run->metrics.units_per_phase) phases += units;
        CHECK(phases == run->metrics.units_total);
        std::int64_t stages = 0;
        for (const auto& s : run->metrics.stages) stages += s.units;
        CHECK(stages == run->metrics.units_per_phase.at(kPhaseAssign));
      }
    }
  }
}

TEST_CASE("runs are deterministic") {
  const Instance inst = gen_random(6, 11, 50, 0.8, 5);
  ProtocolConfig cfg = config(EngineKind::Async);
  cfg.seed = 5;
  cfg.delay = DelayModel::uniform(1, 6, 9);
  std::vector<std::int64_t> t1, t2;
  cfg.trace = [&](const TraceRecord& r) { t1.push_back(r.t); };
  const RunResult a = run_protocol(inst, cfg);
  cfg.trace = [&](const TraceRecord& r) { t2.push_back(r.t); };
  const RunResult b = run_protocol(inst, cfg);
  CHECK(a.assignment == b.assignment);
  CHECK(a.metrics.units_total == b.metrics.units_total);
  CHECK(a.metrics.time_units == b.metrics.time_units);
  CHECK(t1 == t2);
  CHECK(!t1.empty());
}

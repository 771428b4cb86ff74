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

#include <sstream>

#include "ringbalance/acceptance.hpp"
#include "ringbalance/bench.hpp"
#include "ringbalance/fixtures.hpp"
#include "ringbalance/instances.hpp"
#include "ringbalance/variants.hpp"

using namespace ringbalance;

TEST_CASE("instance json round trip") {
  const Instance inst = fixtures::three_agent_example();
  const Json j = instance_to_json(inst, Json{{"family", "fixture"}});
  CHECK(j["n"] == 3);
  CHECK(j["m"] == 6);
  CHECK(instance_from_json(Json::parse(j.dump())) == inst);
  const Assignment a = fixtures::three_agent_assignment_c();
  CHECK(assignment_from_json(assignment_to_json(a)) == a);
  CHECK_THROWS_AS(instance_from_json(Json::parse(R"({"n": 2})")), Error);
  CHECK_THROWS_AS(instance_from_json(Json::parse(R"({"n": 2, "m": 2, "q": [[1, 0]]})")), Error);
  CHECK_THROWS_AS(read_json_file("/nonexistent/instance.json"), Error);
}

TEST_CASE("delay specs") {
  CHECK(parse_delay("unit", 1).is_unit());
  CHECK_FALSE(parse_delay("uniform:1,5", 1).is_unit());
  CHECK_THROWS_AS(parse_delay("uniform:1", 1), Error);
  CHECK_THROWS_AS(parse_delay("poisson", 1), Error);
  const Json table = Json::parse(R"({"fallback": 2, "links": [{"src": 0, "dir": "cw", "delays": [3, 1]}]})");
  const DelayModel model = delay_from_json(table);
  auto sampler = model.sampler();
  CHECK(sampler.next(0, Direction::Clockwise) == 3);
  CHECK(sampler.next(0, Direction::Clockwise) == 1);
  CHECK(sampler.next(1, Direction::Clockwise) == 2);
  CHECK_THROWS_AS(delay_from_json(Json::parse(R"({"links": [{"src": 0, "dir": "up", "delays": [1]}]})")),
                  Error);
}

TEST_CASE("run report") {
  const Instance inst = fixtures::example_two();
  ProtocolConfig cfg;
  cfg.leader = 0;
  const RunResult run = run_protocol(inst, cfg);
  const Json r = report_json(run, inst, cfg, optimal_assignment(inst));
  CHECK(r["cost"] == 14);
  CHECK(r["oracle_cost"] == 12);
  CHECK(r["ratio"] == "7/6");
  CHECK(r["balanced"] == true);
  CHECK(r["p_hat"] == 4);
  CHECK(r["stages"].size() == run.metrics.stages.size());
  CHECK(r["units_total"] == run.metrics.units_total);
}

TEST_CASE("trace lines") {
  std::ostringstream out;
  ProtocolConfig cfg;
  cfg.trace = jsonl_trace(out);
  run_protocol(gen_random(3, 4, 9, 1.0, 2), cfg);
  std::istringstream in(out.str());
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    const Json j = Json::parse(line);
    CHECK(j.contains("phase"));
    ++lines;
  }
  CHECK(lines > 0);
}

TEST_CASE("protocol names") {
  CHECK(parse_protocol("sync").variant == Variant::Base);
  CHECK(parse_protocol("async:two-approx").engine == EngineKind::Async);
  CHECK(parse_protocol("sync:gather").variant == Variant::Gather);
  CHECK_THROWS_AS(parse_protocol("lockstep"), Error);
  CHECK_THROWS_AS(parse_protocol("sync:best"), Error);
}

TEST_CASE("bench plans") {
  const Json j = Json::parse(R"({"n": [3, 4], "m_factor": [1, 2], "p_max": [9], "density": [1.0],
      "protocols": ["sync", "async:eps-approx"], "reps": 2, "seed": 5, "workers": 1,
      "format": "csv", "epsilon": "1/2"})");
  ExperimentPlan plan = plan_from_json(j);
  const auto rows = run_plan(plan);
  CHECK(rows.size() == 2 * 2 * 2 * 2);
  for (const auto& r : rows) {
    CHECK(r.balanced);
    REQUIRE(r.oracle_cost);
  }
  // Eps rows share instances with the base rows right before them.
  for (std::size_t k = 0; k + 1 < rows.size(); k += 2) {
    CHECK(rows[k].seed == rows[k + 1].seed);
    CHECK(rows[k + 1].stages >= rows[k].stages);
  }
  const std::string csv = render_report(rows, "csv");
  CHECK(csv.rfind(csv_header(), 0) == 0);
  plan.workers = 3;
  CHECK(render_report(run_plan(plan), "csv") == csv);
  CHECK(render_report(run_plan(plan), "jsonl") == render_report(rows, "jsonl"));
  const Json agg = aggregate(rows);
  CHECK(agg.size() == 2 * 2 * 2);

  CHECK_THROWS_AS(plan_from_json(Json::parse(R"({"n": [4], "m": [3], "p_max": [1]})")), Error);
  CHECK_THROWS_AS(plan_from_json(Json::parse(R"({"n": [4], "p_max": [1], "reps": 0})")), Error);
  CHECK_THROWS_AS(plan_from_json(Json::parse(R"({"n": [4], "p_max": [1], "format": "xml"})")),
                  Error);
}

TEST_CASE("acceptance harness notices a corrupted oracle") {
  AcceptanceOptions opts;
  opts.only = {1, 2};
  const auto clean = run_acceptance(opts);
  REQUIRE(clean.size() == 2);
  CHECK(clean[0].pass);
  CHECK(clean[1].pass);
  opts.corrupt_oracle = true;
  const auto bad = run_acceptance(opts);
  CHECK_FALSE(bad[0].pass);
  CHECK(results_json(bad)["pass"] == false);
  CHECK(format_results(bad).find("FAIL [1]") != std::string::npos);
}

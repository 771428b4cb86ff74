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

// Experiment grids. A plan file looks like
//
//   {"n": [4, 8], "m": [], "m_factor": [1, 2], "p_max": [64], "density": [1.0],
//    "protocols": ["sync", "async:two-approx"], "reps": 3, "seed": 7,
//    "workers": 2, "format": "jsonl", "output": "out.jsonl"}
//
// An empty "m" and "m_factor" means m = n. Protocol names are
// "<engine>[:<variant>]" with engine sync|async and variant
// balance|two-approx|eps-approx|gather.

#ifndef RINGBALANCE_BENCH_HPP_
#define RINGBALANCE_BENCH_HPP_

#include <optional>
#include <string>
#include <vector>

#include "ringbalance/io.hpp"

namespace ringbalance {

struct ProtocolChoice {
  EngineKind engine = EngineKind::Sync;
  Variant variant = Variant::Base;
  std::string name;
};

/// Throws InvalidConfig.
ProtocolChoice parse_protocol(const std::string& name);

struct ExperimentPlan {
  std::vector<int> n;
  std::vector<int> m;
  std::vector<int> m_factor;
  std::vector<Count> p_max;
  std::vector<double> density;
  std::vector<ProtocolChoice> protocols;
  int reps = 1;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string format = "jsonl";  // or "csv"
  std::string output;            // empty: standard output
  bool with_oracle = true;
  bool emit_assignments = false;
  SelectionPolicy policy = SelectionPolicy::HighestWeightFirst;
  Rational epsilon = Rational(1, 2);
  std::string delay = "unit";
};

/// Throws InvalidConfig when a grid point has m < n or reps < 1.
ExperimentPlan plan_from_json(const Json& j);

struct ReportRow {
  int n = 0;
  int m = 0;
  Count p_max = 0;
  double density = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  std::string protocol;
  Count p = 0;
  Count p_hat = 0;
  Count cost = 0;
  std::optional<Count> oracle_cost;
  std::optional<Ratio> ratio;
  bool balanced = false;
  std::int64_t units_total = 0;
  std::map<std::string, std::int64_t> units_per_phase;
  std::int64_t time_units = 0;
  int stages = 0;
  std::optional<Assignment> assignment;
};

/// Runs every (grid point, rep, protocol) job. Rows come back in plan order
/// whatever the worker count.
std::vector<ReportRow> run_plan(const ExperimentPlan& plan);

/// Fixed CSV header.
std::string csv_header();
std::string to_csv(const ReportRow& row);
Json row_to_json(const ReportRow& row);

/// The whole report in the plan's format.
std::string render_report(const std::vector<ReportRow>& rows, const std::string& format);

/// One row per (point, protocol): medians of units and time, max ratio.
Json aggregate(const std::vector<ReportRow>& rows);

}  // namespace ringbalance

#endif  // RINGBALANCE_BENCH_HPP_

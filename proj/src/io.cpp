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

#include "ringbalance/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace ringbalance {

Json instance_to_json(const Instance& inst, const Json& meta) {
  Json rows = Json::array();
  for (ColorIndex j = 0; j < inst.colors(); ++j) {
    auto r = inst.row(j);
    rows.push_back(std::vector<Count>(r.begin(), r.end()));
  }
  Json out;
  out["n"] = inst.agents();
  out["m"] = inst.colors();
  out["q"] = std::move(rows);
  out["meta"] = meta;
  return out;
}

Instance instance_from_json(const Json& j) {
  try {
    const int n = j.at("n").get<int>();
    const int m = j.at("m").get<int>();
    const auto& q = j.at("q");
    if (!q.is_array() || q.size() != static_cast<std::size_t>(m)) {
      throw Error(ErrorCode::ShapeMismatch, "q must have m rows");
    }
    std::vector<std::vector<Count>> rows;
    for (const auto& row : q) rows.push_back(row.get<std::vector<Count>>());
    return Instance::from_rows(n, rows);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("instance: ") + e.what());
  }
}

Json assignment_to_json(const Assignment& a) { return Json{{"pi", a.pi}}; }

Assignment assignment_from_json(const Json& j) {
  try {
    return Assignment{j.at("pi").get<std::vector<AgentIndex>>()};
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("assignment: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

Instance read_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }

DelayModel delay_from_json(const Json& j) {
  try {
    DelayModel::PerLink table;
    table.fallback = j.value("fallback", std::int64_t{1});
    for (const auto& link : j.value("links", Json::array())) {
      const std::string dir = link.at("dir").get<std::string>();
      if (dir != "cw" && dir != "ccw") throw Error(ErrorCode::InvalidConfig, "dir must be cw or ccw");
      const Direction d = dir == "cw" ? Direction::Clockwise : Direction::CounterClockwise;
      table.delays[{link.at("src").get<AgentIndex>(), d}] =
          link.at("delays").get<std::vector<std::int64_t>>();
    }
    return DelayModel::per_link(std::move(table));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("delay table: ") + e.what());
  }
}

DelayModel parse_delay(const std::string& spec, std::uint64_t seed) {
  if (spec == "unit") return DelayModel::unit();
  if (spec.rfind("uniform:", 0) == 0) {
    const std::string body = spec.substr(8);
    const auto comma = body.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::InvalidConfig, "uniform:lo,hi expected");
    try {
      return DelayModel::uniform(std::stoll(body.substr(0, comma)), std::stoll(body.substr(comma + 1)),
                                 seed);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidConfig, "bad uniform bounds: " + body);
    }
  }
  if (spec.rfind("table:", 0) == 0) {
    try {
      return delay_from_json(read_json_file(spec.substr(6)));
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidConfig, e.what());
    }
  }
  throw Error(ErrorCode::InvalidConfig, "unknown delay model: " + spec);
}

Json report_json(const RunResult& run, const Instance& inst, const ProtocolConfig& config,
                 const std::optional<Solution>& oracle) {
  Json out;
  out["engine"] = std::string(to_string(config.engine));
  out["variant"] = std::string(to_string(config.variant));
  out["policy"] = std::string(to_string(config.policy));
  out["n"] = inst.agents();
  out["m"] = inst.colors();
  out["leader"] = run.leader;
  out["assignment"] = run.assignment.pi;
  const Count c = cost(run.assignment, inst);
  out["cost"] = c;
  out["balanced"] = is_balanced(run.assignment, inst);
  if (oracle) {
    const Ratio ratio = approximation_ratio(c, oracle->cost);
    out["oracle_cost"] = oracle->cost;
    out["ratio"] = ratio.str();
    out["ratio_value"] = ratio.infinite ? Json("inf") : Json(ratio.to_double());
  }
  out["p_hat"] = run.estimate.p_hat;
  out["units_total"] = run.metrics.units_total;
  out["messages"] = run.metrics.messages;
  out["units_per_phase"] = run.metrics.units_per_phase;
  out["time_units"] = run.metrics.time_units;
  out["time_per_phase"] = run.metrics.time_per_phase;
  Json stages = Json::array();
  for (const auto& s : run.metrics.stages) {
    Json lo_hi = Json::array({s.interval.lo});
    lo_hi.push_back(s.interval.hi ? Json(*s.interval.hi) : Json(nullptr));
    stages.push_back(Json{{"r", s.r},
                          {"interval", lo_hi},
                          {"step_two", s.step_two},
                          {"K_r", s.colors_assigned},
                          {"units", s.units}});
  }
  out["stages"] = std::move(stages);
  return out;
}

TraceSink jsonl_trace(std::ostream& out) {
  return [&out](const TraceRecord& r) {
    out << Json{{"t", r.t}, {"src", r.src}, {"dst", r.dst}, {"phase", r.phase}, {"units", r.units}}
               .dump()
        << '\n';
  };
}

}  // namespace ringbalance

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

// JSON formats.
//
//   instance    {"n": 2, "m": 3, "q": [[1, 0], [0, 2], [4, 4]], "meta": {...}}
//               row j holds color j's counts per agent
//   assignment  {"pi": [0, 1, 1]}
//   delay table {"fallback": 1, "links": [{"src": 0, "dir": "cw", "delays": [3, 1]}]}

#ifndef RINGBALANCE_IO_HPP_
#define RINGBALANCE_IO_HPP_

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "ringbalance/oracle.hpp"
#include "ringbalance/protocols.hpp"

namespace ringbalance {

using Json = nlohmann::ordered_json;

Json instance_to_json(const Instance& inst, const Json& meta = Json::object());
Instance instance_from_json(const Json& j);

Json assignment_to_json(const Assignment& a);
Assignment assignment_from_json(const Json& j);

/// Throws IoError when the file cannot be read, ParseError on bad JSON.
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Instance read_instance(const std::string& path);

/// "unit", "uniform:lo,hi" or "table:<file>". Throws InvalidConfig.
DelayModel parse_delay(const std::string& spec, std::uint64_t seed);
DelayModel delay_from_json(const Json& j);

/// One run as a report object. `oracle` adds oracle_cost and ratio.
Json report_json(const RunResult& run, const Instance& inst, const ProtocolConfig& config,
                 const std::optional<Solution>& oracle);

/// Writes trace records as JSON lines.
TraceSink jsonl_trace(std::ostream& out);

}  // namespace ringbalance

#endif  // RINGBALANCE_IO_HPP_

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

#ifndef RINGBALANCE_ACCEPTANCE_HPP_
#define RINGBALANCE_ACCEPTANCE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ringbalance/io.hpp"

namespace ringbalance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string measured;
};

struct AcceptanceOptions {
  /// Skews every oracle cost by one so that the harness can prove it notices.
  bool corrupt_oracle = false;
  std::uint64_t seed = 20260101;
  /// Restrict to these criterion ids; empty runs all.
  std::vector<int> only;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

std::string format_results(const std::vector<CriterionResult>& results);
Json results_json(const std::vector<CriterionResult>& results);

}  // namespace ringbalance

#endif  // RINGBALANCE_ACCEPTANCE_HPP_

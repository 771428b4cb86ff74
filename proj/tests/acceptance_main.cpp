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


// Prints one PASS/FAIL line per acceptance criterion and exits nonzero when
// any criterion fails.

#include <iostream>

#include "ringbalance/acceptance.hpp"

int main() {
  const auto results = ringbalance::run_acceptance({});
  std::cout << ringbalance::format_results(results);
  for (const auto& r : results) {
    if (!r.pass) return 1;
  }
  return 0;
}

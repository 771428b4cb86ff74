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

#ifndef RINGBALANCE_SRC_BALANCE_IMPL_HPP_
#define RINGBALANCE_SRC_BALANCE_IMPL_HPP_

#include "ringbalance/protocols.hpp"

namespace ringbalance::detail {

RunResult run_staged(const Instance& inst, const ProtocolConfig& config, const Rational& base,
                     StageRule rule);

void fill_totals(RunMetrics& metrics, const MessageAccounting& acct);

}  // namespace ringbalance::detail

#endif  // RINGBALANCE_SRC_BALANCE_IMPL_HPP_

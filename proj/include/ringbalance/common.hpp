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

#ifndef RINGBALANCE_COMMON_HPP_
#define RINGBALANCE_COMMON_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace ringbalance {

/// Item counts, weights and costs. Always exact.
using Count = std::int64_t;
using AgentIndex = int;
using ColorIndex = int;
using Rational = boost::multiprecision::cpp_rational;

enum class ErrorCode {
  NegativeCount,
  FewerColorsThanAgents,
  ShapeMismatch,
  InvalidArgument,
  InvalidBase,
  NonNeighborSend,
  RoundLimitExceeded,
  EventLimitExceeded,
  DuplicateIds,
  Stall,
  DesyncDetected,
  InvalidEpsilon,
  TooLarge,
  NotFamilyInstance,
  BadParams,
  BadSpec,
  NonIntegralWeights,
  IntervalConditionUnsatisfiable,
  IoError,
  InvalidConfig,
  ParseError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// ceil(log2(x)) for x >= 1; 0 for x <= 1.
int ceil_log2(std::uint64_t x);
// floor(log2(x)) for x >= 1.
int floor_log2(std::uint64_t x);

/// Bit sizes of the semantic payload fields.
namespace bits {
int label(int n);          // agent label, max(1, ceil(log2 n))
int color(int m);          // color ID, max(1, ceil(log2 m))
int counter(int n);        // a counter in [0, n], ceil(log2(n+1))
int weight(Count value);   // a weight value, max(1, ceil(log2(value+1)))
}  // namespace bits

/// Parses "3", "0.25", "-1/2" into an exact rational.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& value);
/// Smallest integer >= value.
Count ceil_to_count(const Rational& value);
double to_double(const Rational& value);

}  // namespace ringbalance

#endif  // RINGBALANCE_COMMON_HPP_

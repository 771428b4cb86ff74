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

#include "ringbalance/common.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

namespace ringbalance {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeCount: return "NegativeCount";
    case ErrorCode::FewerColorsThanAgents: return "FewerColorsThanAgents";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidBase: return "InvalidBase";
    case ErrorCode::NonNeighborSend: return "NonNeighborSend";
    case ErrorCode::RoundLimitExceeded: return "RoundLimitExceeded";
    case ErrorCode::EventLimitExceeded: return "EventLimitExceeded";
    case ErrorCode::DuplicateIds: return "DuplicateIds";
    case ErrorCode::Stall: return "Stall";
    case ErrorCode::DesyncDetected: return "DesyncDetected";
    case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotFamilyInstance: return "NotFamilyInstance";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::BadSpec: return "BadSpec";
    case ErrorCode::NonIntegralWeights: return "NonIntegralWeights";
    case ErrorCode::IntervalConditionUnsatisfiable:
      return "IntervalConditionUnsatisfiable";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code) {}

int ceil_log2(std::uint64_t x) {
  if (x <= 1) return 0;
  return std::bit_width(x - 1);
}

int floor_log2(std::uint64_t x) {
  if (x == 0) throw Error(ErrorCode::InvalidArgument, "floor_log2(0)");
  return std::bit_width(x) - 1;
}

namespace bits {

int label(int n) { return std::max(1, ceil_log2(static_cast<std::uint64_t>(n))); }

int color(int m) { return std::max(1, ceil_log2(static_cast<std::uint64_t>(m))); }

int counter(int n) {
  return std::max(1, ceil_log2(static_cast<std::uint64_t>(n) + 1));
}

int weight(Count value) {
  return std::max(1, ceil_log2(static_cast<std::uint64_t>(value) + 1));
}

}  // namespace bits

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  auto fail = [&] {
    return Error(ErrorCode::ParseError, "not a rational: '" + std::string(text) + "'");
  };
  using boost::multiprecision::cpp_int;
  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw fail();
    const cpp_int d{std::string(den)};
    if (d == 0) throw fail();
    value = Rational(cpp_int(std::string(num)), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || !all_digits(frac)) throw fail();
    cpp_int scale = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(frac.size()));
    value = Rational(cpp_int(std::string(whole)) * scale + cpp_int(std::string(frac.empty() ? "0" : frac)), scale);
  } else {
    if (!all_digits(s)) throw fail();
    value = Rational(cpp_int(std::string(s)));
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& value) {
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

Count ceil_to_count(const Rational& value) {
  using boost::multiprecision::cpp_int;
  cpp_int num = numerator(value);
  cpp_int den = denominator(value);
  cpp_int q = num / den;  // truncates toward zero
  if (num > 0 && q * den != num) ++q;
  return static_cast<Count>(q);
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace ringbalance

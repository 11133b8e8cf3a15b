// Copyright 2026 The Coins Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COINS_ENV_REWARD_H_
#define COINS_ENV_REWARD_H_

#include <optional>
#include <string_view>

namespace coins {

struct RewardRow {
  int self = 0;
  int other = 0;
  friend bool operator==(const RewardRow&, const RewardRow&) = default;
};

// Payoff table for coin collections. "canonical" is the classic Coins
// dilemma; "offset" adds +2 to every entry so that no outcome is negative.
struct RewardScheme {
  enum class Name { kCanonical, kOffset };

  Name name = Name::kCanonical;
  RewardRow matching;
  RewardRow mismatching;

  static RewardScheme Canonical() { return {Name::kCanonical, {1, 0}, {1, -2}}; }
  static RewardScheme Offset() { return {Name::kOffset, {3, 2}, {3, 0}}; }

  friend bool operator==(const RewardScheme&, const RewardScheme&) = default;
};

// Row of `scheme` for a collection whose coin does / does not match the
// collector's color.
constexpr RewardRow RewardFor(const RewardScheme& scheme, bool matching) {
  return matching ? scheme.matching : scheme.mismatching;
}

std::string_view SchemeName(RewardScheme::Name name);
std::optional<RewardScheme> SchemeByName(std::string_view name);

}  // namespace coins

#endif  // COINS_ENV_REWARD_H_

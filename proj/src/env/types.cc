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

#include "coins/env/types.h"

#include "coins/env/reward.h"

namespace coins {
namespace {

constexpr std::array<std::string_view, kNumColors> kColorNames = {
    "red", "blue", "yellow", "green", "purple"};
constexpr std::array<std::string_view, kNumActions> kActionNames = {
    "no_op", "move_up", "move_down", "move_left", "move_right"};

}  // namespace

std::string_view ColorName(Color c) {
  return kColorNames[static_cast<int>(c)];
}

std::optional<Color> ParseColor(std::string_view name) {
  for (int i = 0; i < kNumColors; ++i) {
    if (kColorNames[i] == name) return static_cast<Color>(i);
  }
  return std::nullopt;
}

std::string_view ActionName(Action a) {
  return kActionNames[static_cast<int>(a)];
}

std::optional<Action> ParseAction(std::string_view name) {
  for (int i = 0; i < kNumActions; ++i) {
    if (kActionNames[i] == name) return static_cast<Action>(i);
  }
  return std::nullopt;
}

std::string_view SchemeName(RewardScheme::Name name) {
  return name == RewardScheme::Name::kCanonical ? "canonical" : "offset";
}

std::optional<RewardScheme> SchemeByName(std::string_view name) {
  if (name == "canonical") return RewardScheme::Canonical();
  if (name == "offset") return RewardScheme::Offset();
  return std::nullopt;
}

}  // namespace coins

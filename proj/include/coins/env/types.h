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

#ifndef COINS_ENV_TYPES_H_
#define COINS_ENV_TYPES_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace coins {

enum class Color { kRed = 0, kBlue, kYellow, kGreen, kPurple };
inline constexpr int kNumColors = 5;
inline constexpr std::array<Color, kNumColors> kAllColors = {
    Color::kRed, Color::kBlue, Color::kYellow, Color::kGreen, Color::kPurple};

enum class Action { kNoOp = 0, kMoveUp, kMoveDown, kMoveLeft, kMoveRight };
inline constexpr int kNumActions = 5;
inline constexpr std::array<Action, kNumActions> kAllActions = {
    Action::kNoOp, Action::kMoveUp, Action::kMoveDown, Action::kMoveLeft,
    Action::kMoveRight};

// Grid position. Row 0 is the top; moving up decreases the row.
struct Position {
  int row = 0;
  int col = 0;
  friend bool operator==(const Position&, const Position&) = default;
  friend auto operator<=>(const Position&, const Position&) = default;
};

inline Position Displace(Position p, Action a) {
  switch (a) {
    case Action::kMoveUp: return {p.row - 1, p.col};
    case Action::kMoveDown: return {p.row + 1, p.col};
    case Action::kMoveLeft: return {p.row, p.col - 1};
    case Action::kMoveRight: return {p.row, p.col + 1};
    case Action::kNoOp: break;
  }
  return p;
}

std::string_view ColorName(Color c);
std::optional<Color> ParseColor(std::string_view name);
std::string_view ActionName(Action a);
std::optional<Action> ParseAction(std::string_view name);

}  // namespace coins

#endif  // COINS_ENV_TYPES_H_

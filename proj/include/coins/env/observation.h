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

#ifndef COINS_ENV_OBSERVATION_H_
#define COINS_ENV_OBSERVATION_H_

#include <cstdint>
#include <string>
#include <vector>

#include "coins/env/game.h"

namespace coins {

enum class Frame { kEgocentric, kAllocentric };

// Symbolic cell codes, relative to the observing player.
enum class ObsCode : uint8_t {
  kOutOfBounds = 0,
  kWall,
  kEmpty,
  kCoinOwn,
  kCoinOther,
  kSelf,
  kCoPlayer,
};
inline constexpr int kNumObsCodes = 7;

inline constexpr int kDefaultEgocentricRadius = 5;

struct Observation {
  Frame frame = Frame::kAllocentric;
  int rows = 0;
  int cols = 0;
  std::vector<ObsCode> cells;  // row-major
  Color self_color = Color::kRed;
  Color other_color = Color::kBlue;

  ObsCode at(int r, int c) const { return cells[r * cols + c]; }
  // Position of the kSelf cell.
  Position self_position() const;
  friend bool operator==(const Observation&, const Observation&) = default;
};

// Egocentric frames are (2 * radius + 1)^2 windows centred on the observer;
// allocentric frames are the full room. A coin hidden under a player is not
// visible. Throws UsageError on an unknown player id.
Observation Observe(const GameState& state, int player, Frame frame,
                    int radius = kDefaultEgocentricRadius);

// One character per cell, rows separated by '\n'. Legend:
//   ' ' out of bounds, '#' wall, '.' empty, 'o' own coin, 'x' other coin,
//   'S' self, 'C' co-player.
std::string ToAscii(const Observation& obs);
char CodeChar(ObsCode code);

// Inverse of ToAscii for equal-length rows; throws ValidationError on an
// unknown character or ragged rows. Colors are left at their defaults.
Observation ParseAscii(const std::vector<std::string>& rows,
                       Frame frame = Frame::kAllocentric);

}  // namespace coins

#endif  // COINS_ENV_OBSERVATION_H_

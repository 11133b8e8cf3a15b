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

#include "coins/env/observation.h"

#include "coins/errors.h"

namespace coins {

Position Observation::self_position() const {
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (at(r, c) == ObsCode::kSelf) return {r, c};
    }
  }
  throw UsageError("observation has no self cell");
}

Observation Observe(const GameState& state, int player, Frame frame,
                    int radius) {
  if (player < 0 || player >= state.num_players()) {
    throw UsageError("unknown player id " + std::to_string(player));
  }
  const PlayerState& me = state.players()[player];
  const auto [first, second] = state.episode_colors();

  Observation obs;
  obs.frame = frame;
  obs.self_color = me.color;
  obs.other_color = me.color == first ? second : first;

  Position origin{0, 0};
  if (frame == Frame::kEgocentric) {
    obs.rows = obs.cols = 2 * radius + 1;
    origin = {me.pos.row - radius, me.pos.col - radius};
  } else {
    obs.rows = state.rows();
    obs.cols = state.cols();
  }
  obs.cells.resize(static_cast<size_t>(obs.rows) * obs.cols);

  for (int r = 0; r < obs.rows; ++r) {
    for (int c = 0; c < obs.cols; ++c) {
      const Position p{origin.row + r, origin.col + c};
      ObsCode code;
      if (!state.InBounds(p)) {
        code = ObsCode::kOutOfBounds;
      } else if (auto occupant = state.PlayerAt(p)) {
        code = *occupant == player ? ObsCode::kSelf : ObsCode::kCoPlayer;
      } else {
        const Cell& cell = state.at(p);
        if (cell.is_wall()) {
          code = ObsCode::kWall;
        } else if (cell.has_coin()) {
          code = cell.coin == me.color ? ObsCode::kCoinOwn : ObsCode::kCoinOther;
        } else {
          code = ObsCode::kEmpty;
        }
      }
      obs.cells[static_cast<size_t>(r) * obs.cols + c] = code;
    }
  }
  return obs;
}

char CodeChar(ObsCode code) {
  switch (code) {
    case ObsCode::kOutOfBounds: return ' ';
    case ObsCode::kWall: return '#';
    case ObsCode::kEmpty: return '.';
    case ObsCode::kCoinOwn: return 'o';
    case ObsCode::kCoinOther: return 'x';
    case ObsCode::kSelf: return 'S';
    case ObsCode::kCoPlayer: return 'C';
  }
  return '?';
}

std::string ToAscii(const Observation& obs) {
  std::string out;
  out.reserve(static_cast<size_t>(obs.rows) * (obs.cols + 1));
  for (int r = 0; r < obs.rows; ++r) {
    if (r > 0) out.push_back('\n');
    for (int c = 0; c < obs.cols; ++c) out.push_back(CodeChar(obs.at(r, c)));
  }
  return out;
}

Observation ParseAscii(const std::vector<std::string>& rows, Frame frame) {
  Observation obs;
  obs.frame = frame;
  obs.rows = static_cast<int>(rows.size());
  obs.cols = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  obs.cells.reserve(static_cast<size_t>(obs.rows) * obs.cols);
  for (const std::string& row : rows) {
    if (static_cast<int>(row.size()) != obs.cols) {
      throw ValidationError("ragged observation rows");
    }
    for (char ch : row) {
      switch (ch) {
        case ' ': obs.cells.push_back(ObsCode::kOutOfBounds); break;
        case '#': obs.cells.push_back(ObsCode::kWall); break;
        case '.': obs.cells.push_back(ObsCode::kEmpty); break;
        case 'o': obs.cells.push_back(ObsCode::kCoinOwn); break;
        case 'x': obs.cells.push_back(ObsCode::kCoinOther); break;
        case 'S': obs.cells.push_back(ObsCode::kSelf); break;
        case 'C': obs.cells.push_back(ObsCode::kCoPlayer); break;
        default:
          throw ValidationError(std::string("unknown observation character '") + ch + "'");
      }
    }
  }
  return obs;
}

}  // namespace coins

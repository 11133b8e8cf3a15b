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

#ifndef COINS_ENV_GAME_H_
#define COINS_ENV_GAME_H_

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "coins/env/rng.h"
#include "coins/env/task_config.h"
#include "coins/env/types.h"

namespace coins {

struct Cell {
  enum class Kind : uint8_t { kWall, kEmpty, kCoin };
  Kind kind = Kind::kEmpty;
  Color coin = Color::kRed;  // meaningful only for kCoin

  bool is_wall() const { return kind == Kind::kWall; }
  bool has_coin() const { return kind == Kind::kCoin; }
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct PlayerState {
  int id = 0;
  Color color = Color::kRed;
  Position pos;
  friend bool operator==(const PlayerState&, const PlayerState&) = default;
};

struct CollectionEvent {
  int collector = 0;
  Color coin = Color::kRed;
  bool matching = false;
  friend bool operator==(const CollectionEvent&,
                         const CollectionEvent&) = default;
};

struct StepOutcome {
  std::vector<int> rewards;  // per player
  std::vector<CollectionEvent> events;
  int spawned = 0;  // coins that appeared this step
  bool terminal = false;
  friend bool operator==(const StepOutcome&, const StepOutcome&) = default;
};

// Authoritative simulation state of one episode. Single writer; copies are
// fully independent.
class GameState {
 public:
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const Cell& at(Position p) const { return grid_[Index(p)]; }
  bool InBounds(Position p) const {
    return p.row >= 0 && p.row < rows_ && p.col >= 0 && p.col < cols_;
  }
  const std::vector<Cell>& grid() const { return grid_; }
  const std::vector<PlayerState>& players() const { return players_; }
  int num_players() const { return static_cast<int>(players_.size()); }
  int step_index() const { return step_index_; }
  int horizon() const { return horizon_; }
  bool terminal() const { return step_index_ >= horizon_; }
  const std::vector<int>& cumulative_score() const { return cumulative_score_; }
  std::pair<Color, Color> episode_colors() const { return episode_colors_; }
  // Index of the player standing on `p`, if any.
  std::optional<int> PlayerAt(Position p) const;
  // Total generator draws consumed so far across all streams.
  uint64_t rng_draws() const {
    return setup_rng_.draws() + spawn_rng_.draws() + priority_rng_.draws();
  }
  int coins_on_grid() const;

  // Test hook: places a coin (or clears it) on an interior cell.
  void SetCoin(Position p, std::optional<Color> coin);
  // Test hook: moves every player to the given distinct interior cells.
  void SetPlayerPositions(std::span<const Position> positions);

  friend bool operator==(const GameState&, const GameState&) = default;

 private:
  friend GameState GenerateRoom(const TaskConfig&, uint64_t,
                                std::optional<std::pair<Color, Color>>);
  friend StepOutcome Step(GameState&, std::span<const Action>,
                          const TaskConfig&);

  int Index(Position p) const { return p.row * cols_ + p.col; }
  Cell& mutable_at(Position p) { return grid_[Index(p)]; }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<Cell> grid_;
  std::vector<PlayerState> players_;
  int step_index_ = 0;
  int horizon_ = 0;
  std::vector<int> cumulative_score_;
  std::pair<Color, Color> episode_colors_{Color::kRed, Color::kBlue};
  Rng setup_rng_;
  Rng spawn_rng_;
  Rng priority_rng_;
};

// Builds the step-0 state: walls on the boundary, no coins, players on
// distinct uniformly random interior cells. Episode colors are sampled
// without replacement unless `colors` is given; player 0 takes the first
// color, player 1 the second. Identical (config, seed) give identical states.
// Throws ConfigError when the interior cannot hold every player.
GameState GenerateRoom(
    const TaskConfig& config, uint64_t seed,
    std::optional<std::pair<Color, Color>> colors = std::nullopt);

// Advances one step with simultaneous moves:
//  1. Moves into walls or into a cell currently occupied by a player are
//     blocked (so swaps are blocked for both). When several players target
//     the same free cell a fair random priority decides the single winner.
//  2. A player entering a coin cell collects it.
//  3. Every interior cell without a coin spawns one with probability P,
//     color fair between the two episode colors. A coin spawning under a
//     player stays there until a player steps onto the cell.
//  4. step_index increments.
// Throws UsageError on a terminal state or a wrong number of actions.
StepOutcome Step(GameState& state, std::span<const Action> joint_action,
                 const TaskConfig& config);

}  // namespace coins

#endif  // COINS_ENV_GAME_H_

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

#include "coins/env/game.h"

#include <algorithm>
#include <string>

#include "coins/env/reward.h"
#include "coins/errors.h"

namespace coins {
namespace {

enum Stream : uint64_t { kSetupStream = 0, kSpawnStream = 1, kPriorityStream = 2 };

}  // namespace

std::optional<int> GameState::PlayerAt(Position p) const {
  for (const PlayerState& player : players_) {
    if (player.pos == p) return player.id;
  }
  return std::nullopt;
}

int GameState::coins_on_grid() const {
  return static_cast<int>(std::count_if(
      grid_.begin(), grid_.end(), [](const Cell& c) { return c.has_coin(); }));
}

void GameState::SetCoin(Position p, std::optional<Color> coin) {
  if (!InBounds(p) || at(p).is_wall()) {
    throw UsageError("SetCoin: not an interior cell");
  }
  Cell& cell = mutable_at(p);
  if (coin) {
    cell.kind = Cell::Kind::kCoin;
    cell.coin = *coin;
  } else {
    cell.kind = Cell::Kind::kEmpty;
  }
}

void GameState::SetPlayerPositions(std::span<const Position> positions) {
  if (static_cast<int>(positions.size()) != num_players()) {
    throw UsageError("SetPlayerPositions: one position per player expected");
  }
  for (size_t i = 0; i < positions.size(); ++i) {
    const Position p = positions[i];
    if (!InBounds(p) || at(p).is_wall()) {
      throw UsageError("SetPlayerPositions: not an interior cell");
    }
    for (size_t j = 0; j < i; ++j) {
      if (positions[j] == p) throw UsageError("SetPlayerPositions: overlap");
    }
  }
  for (size_t i = 0; i < positions.size(); ++i) players_[i].pos = positions[i];
}

GameState GenerateRoom(const TaskConfig& config, uint64_t seed,
                       std::optional<std::pair<Color, Color>> colors) {
  config.Validate();
  GameState s;
  s.setup_rng_ = Rng(DeriveSeed(seed, kSetupStream));
  s.spawn_rng_ = Rng(DeriveSeed(seed, kSpawnStream));
  s.priority_rng_ = Rng(DeriveSeed(seed, kPriorityStream));

  int width = config.width;
  int depth = config.depth;
  if (config.room_mode == TaskConfig::RoomMode::kSampledUniform) {
    const int span = config.sampled_max - config.sampled_min + 1;
    width = config.sampled_min + s.setup_rng_.UniformInt(span);
    depth = config.sampled_min + s.setup_rng_.UniformInt(span);
  }
  s.rows_ = depth;
  s.cols_ = width;
  s.grid_.assign(static_cast<size_t>(depth) * width, Cell{});
  for (int r = 0; r < depth; ++r) {
    for (int c = 0; c < width; ++c) {
      if (r == 0 || c == 0 || r == depth - 1 || c == width - 1) {
        s.mutable_at({r, c}).kind = Cell::Kind::kWall;
      }
    }
  }

  if (colors) {
    if (colors->first == colors->second) {
      throw ConfigError("episode colors must be distinct");
    }
    s.episode_colors_ = *colors;
  } else {
    const int first = s.setup_rng_.UniformInt(kNumColors);
    int second = s.setup_rng_.UniformInt(kNumColors - 1);
    if (second >= first) ++second;
    s.episode_colors_ = {static_cast<Color>(first), static_cast<Color>(second)};
  }

  std::vector<Position> interior;
  for (int r = 1; r < depth - 1; ++r) {
    for (int c = 1; c < width - 1; ++c) interior.push_back({r, c});
  }
  if (static_cast<int>(interior.size()) < config.n_players) {
    throw ConfigError("room interior too small for the players");
  }
  // Partial Fisher-Yates: the first n entries become the spawn cells.
  for (int i = 0; i < config.n_players; ++i) {
    const int j = i + s.setup_rng_.UniformInt(
                          static_cast<int>(interior.size()) - i);
    std::swap(interior[i], interior[j]);
    const Color color =
        i == 0 ? s.episode_colors_.first : s.episode_colors_.second;
    s.players_.push_back({i, color, interior[i]});
  }

  s.step_index_ = 0;
  s.horizon_ = config.horizon;
  s.cumulative_score_.assign(config.n_players, 0);
  return s;
}

StepOutcome Step(GameState& s, std::span<const Action> joint_action,
                 const TaskConfig& config) {
  if (s.terminal()) throw UsageError("step called on a terminal state");
  const int n = s.num_players();
  if (static_cast<int>(joint_action.size()) != n) {
    throw UsageError("expected " + std::to_string(n) + " actions, got " +
                     std::to_string(joint_action.size()));
  }

  // Movement.
  std::vector<Position> target(n);
  for (int i = 0; i < n; ++i) {
    const Position from = s.players_[i].pos;
    Position to = Displace(from, joint_action[i]);
    if (!s.InBounds(to) || s.at(to).is_wall()) to = from;
    if (to != from) {
      for (int j = 0; j < n; ++j) {
        if (j != i && s.players_[j].pos == to) {
          to = from;
          break;
        }
      }
    }
    target[i] = to;
  }
  std::vector<bool> resolved(n, false);
  for (int i = 0; i < n; ++i) {
    if (resolved[i] || target[i] == s.players_[i].pos) continue;
    std::vector<int> contenders;
    for (int j = i; j < n; ++j) {
      if (target[j] == target[i] && target[j] != s.players_[j].pos) {
        contenders.push_back(j);
      }
    }
    if (contenders.size() > 1) {
      const int winner = contenders[s.priority_rng_.UniformInt(
          static_cast<int>(contenders.size()))];
      for (int j : contenders) {
        if (j != winner) target[j] = s.players_[j].pos;
      }
    }
    for (int j : contenders) resolved[j] = true;
  }

  StepOutcome out;
  out.rewards.assign(n, 0);
  auto credit = [&](int collector, Color coin) {
    const bool matching = coin == s.players_[collector].color;
    const RewardRow row = RewardFor(config.scheme, matching);
    for (int j = 0; j < n; ++j) {
      out.rewards[j] += j == collector ? row.self : row.other;
    }
    out.events.push_back({collector, coin, matching});
  };

  for (int i = 0; i < n; ++i) {
    if (target[i] == s.players_[i].pos) continue;
    s.players_[i].pos = target[i];
    Cell& cell = s.mutable_at(target[i]);
    if (cell.has_coin()) {
      credit(i, cell.coin);
      cell.kind = Cell::Kind::kEmpty;
    }
  }

  // Spawning, row-major over the interior; one draw per coin-free cell.
  for (int r = 1; r < s.rows_ - 1; ++r) {
    for (int c = 1; c < s.cols_ - 1; ++c) {
      Cell& cell = s.mutable_at({r, c});
      if (cell.has_coin()) continue;
      if (s.spawn_rng_.Bernoulli(config.spawn_prob)) {
        ++out.spawned;
        cell.kind = Cell::Kind::kCoin;
        cell.coin = s.spawn_rng_.UniformInt(2) == 0 ? s.episode_colors_.first
                                                    : s.episode_colors_.second;
      }
    }
  }

  ++s.step_index_;
  for (int i = 0; i < n; ++i) s.cumulative_score_[i] += out.rewards[i];
  out.terminal = s.terminal();
  return out;
}

}  // namespace coins

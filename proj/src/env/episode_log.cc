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

#include "coins/env/episode_log.h"

#include <string>

namespace coins {

nlohmann::json EventToJson(const CollectionEvent& e) {
  return {{"collector", e.collector},
          {"coin", std::string(ColorName(e.coin))},
          {"matching", e.matching}};
}

nlohmann::json RoomSnapshot(const GameState& state, const TaskConfig& config,
                            uint64_t seed) {
  nlohmann::json grid = nlohmann::json::array();
  for (int r = 0; r < state.rows(); ++r) {
    std::string row;
    for (int c = 0; c < state.cols(); ++c) {
      const Cell& cell = state.at({r, c});
      row.push_back(cell.is_wall() ? '#' : cell.has_coin() ? 'c' : '.');
    }
    grid.push_back(row);
  }
  nlohmann::json players = nlohmann::json::array();
  for (const PlayerState& p : state.players()) {
    players.push_back({{"id", p.id},
                       {"color", std::string(ColorName(p.color))},
                       {"row", p.pos.row},
                       {"col", p.pos.col}});
  }
  const auto [a, b] = state.episode_colors();
  return {{"type", "room"},
          {"seed", seed},
          {"config", config},
          {"rows", state.rows()},
          {"cols", state.cols()},
          {"grid", grid},
          {"colors", {std::string(ColorName(a)), std::string(ColorName(b))}},
          {"players", players}};
}

nlohmann::json StepRecord(const GameState& after,
                          std::span<const Action> joint_action,
                          const StepOutcome& outcome) {
  nlohmann::json actions = nlohmann::json::array();
  for (Action a : joint_action) actions.push_back(std::string(ActionName(a)));
  nlohmann::json events = nlohmann::json::array();
  for (const CollectionEvent& e : outcome.events) events.push_back(EventToJson(e));
  return {{"type", "step"},
          {"step", after.step_index()},
          {"joint_action", actions},
          {"events", events},
          {"rewards", outcome.rewards},
          {"spawned", outcome.spawned},
          {"rng_draws_count", after.rng_draws()}};
}

void EpisodeLogWriter::Begin(const GameState& state, const TaskConfig& config,
                             uint64_t seed) {
  out_ << RoomSnapshot(state, config, seed).dump() << '\n';
}

void EpisodeLogWriter::Record(const GameState& after,
                              std::span<const Action> joint_action,
                              const StepOutcome& outcome) {
  out_ << StepRecord(after, joint_action, outcome).dump() << '\n';
}

}  // namespace coins

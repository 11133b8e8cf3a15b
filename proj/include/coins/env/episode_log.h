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

#ifndef COINS_ENV_EPISODE_LOG_H_
#define COINS_ENV_EPISODE_LOG_H_

#include <cstdint>
#include <ostream>
#include <span>

#include "coins/env/game.h"
#include "json.hpp"

namespace coins {

// Room snapshot written once at episode start:
//   {"type":"room","seed":..,"config":{..},"rows":..,"cols":..,
//    "grid":["#####",..],"colors":[..],"players":[{"id","color","row","col"}]}
nlohmann::json RoomSnapshot(const GameState& state, const TaskConfig& config,
                            uint64_t seed);

// One record per step:
//   {"type":"step","step":k,"joint_action":[..],"events":[..],
//    "rewards":[..],"spawned":k,"rng_draws_count":n}
nlohmann::json StepRecord(const GameState& after,
                          std::span<const Action> joint_action,
                          const StepOutcome& outcome);

nlohmann::json EventToJson(const CollectionEvent& e);

// Writes JSON-lines episode logs.
class EpisodeLogWriter {
 public:
  explicit EpisodeLogWriter(std::ostream& out) : out_(out) {}
  void Begin(const GameState& state, const TaskConfig& config, uint64_t seed);
  void Record(const GameState& after, std::span<const Action> joint_action,
              const StepOutcome& outcome);

 private:
  std::ostream& out_;
};

}  // namespace coins

#endif  // COINS_ENV_EPISODE_LOG_H_

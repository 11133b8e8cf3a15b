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

#ifndef COINS_ENV_TASK_CONFIG_H_
#define COINS_ENV_TASK_CONFIG_H_

#include <cstdint>

#include "coins/env/reward.h"
#include "json.hpp"

namespace coins {

// Everything needed to instantiate one Coins episode.
struct TaskConfig {
  enum class RoomMode { kFixed, kSampledUniform };

  int n_players = 2;
  RoomMode room_mode = RoomMode::kFixed;
  int width = 11;  // columns, walls included
  int depth = 11;  // rows, walls included
  // Inclusive range for kSampledUniform, per axis.
  int sampled_min = 10;
  int sampled_max = 15;
  double spawn_prob = 0.0005;
  int horizon = 300;
  RewardScheme scheme = RewardScheme::Canonical();
  uint64_t seed = 0;

  // Throws ConfigError.
  void Validate() const;

  // Agent-training rooms: w, d ~ U{10, 15}, P = 0.0005, T = 500.
  static TaskConfig Training();
  // Human co-play episodes: 11 x 11, P = 0.0005, T = 300.
  static TaskConfig Coplay();
  // Solo practice episode: 5 x 7, P = 0.0015, T = 1500.
  static TaskConfig Tutorial();
};

void to_json(nlohmann::json& j, const TaskConfig& c);
// Keys absent from `j` keep the value already held by `c`.
void from_json(const nlohmann::json& j, TaskConfig& c);

}  // namespace coins

#endif  // COINS_ENV_TASK_CONFIG_H_

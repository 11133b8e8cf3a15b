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

#include "coins/env/task_config.h"

#include <string>

#include "coins/errors.h"

namespace coins {

void TaskConfig::Validate() const {
  if (n_players < 1 || n_players > 2) {
    throw ConfigError("n_players must be 1 or 2, got " +
                      std::to_string(n_players));
  }
  if (!(spawn_prob >= 0.0 && spawn_prob <= 1.0)) {
    throw ConfigError("spawn_prob must lie in [0, 1]");
  }
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  if (room_mode == RoomMode::kFixed) {
    if (width < 3 || depth < 3) {
      throw ConfigError("room must be at least 3 x 3 to have an interior");
    }
    if ((width - 2) * (depth - 2) < n_players) {
      throw ConfigError("room interior too small for " +
                        std::to_string(n_players) + " players");
    }
  } else {
    if (sampled_min < 3 || sampled_max < sampled_min) {
      throw ConfigError("invalid sampled room size range");
    }
    if ((sampled_min - 2) * (sampled_min - 2) < n_players) {
      throw ConfigError("smallest sampled room cannot hold every player");
    }
  }
}

TaskConfig TaskConfig::Training() {
  TaskConfig c;
  c.room_mode = RoomMode::kSampledUniform;
  c.spawn_prob = 0.0005;
  c.horizon = 500;
  return c;
}

TaskConfig TaskConfig::Coplay() {
  TaskConfig c;
  c.width = 11;
  c.depth = 11;
  c.spawn_prob = 0.0005;
  c.horizon = 300;
  return c;
}

TaskConfig TaskConfig::Tutorial() {
  TaskConfig c;
  c.n_players = 1;
  c.width = 5;
  c.depth = 7;
  c.spawn_prob = 0.0015;
  c.horizon = 1500;
  return c;
}

void to_json(nlohmann::json& j, const TaskConfig& c) {
  j = nlohmann::json{
      {"n_players", c.n_players},
      {"room_mode",
       c.room_mode == TaskConfig::RoomMode::kFixed ? "fixed"
                                                   : "sampled_uniform"},
      {"width", c.width},
      {"depth", c.depth},
      {"sampled_min", c.sampled_min},
      {"sampled_max", c.sampled_max},
      {"spawn_prob", c.spawn_prob},
      {"horizon", c.horizon},
      {"scheme", std::string(SchemeName(c.scheme.name))},
      {"seed", c.seed},
  };
}

// Missing keys keep their defaults so partial config files are accepted.
void from_json(const nlohmann::json& j, TaskConfig& c) {
  const TaskConfig d = c;
  c.n_players = j.value("n_players", d.n_players);
  const std::string mode = j.value(
      "room_mode", std::string(d.room_mode == TaskConfig::RoomMode::kFixed ? "fixed"
                                                                          : "sampled_uniform"));
  if (mode == "fixed") {
    c.room_mode = TaskConfig::RoomMode::kFixed;
  } else if (mode == "sampled_uniform") {
    c.room_mode = TaskConfig::RoomMode::kSampledUniform;
  } else {
    throw ConfigError("unknown room_mode '" + mode + "'");
  }
  c.width = j.value("width", d.width);
  c.depth = j.value("depth", d.depth);
  c.sampled_min = j.value("sampled_min", d.sampled_min);
  c.sampled_max = j.value("sampled_max", d.sampled_max);
  c.spawn_prob = j.value("spawn_prob", d.spawn_prob);
  c.horizon = j.value("horizon", d.horizon);
  const std::string scheme = j.value("scheme", std::string(SchemeName(d.scheme.name)));
  auto parsed = SchemeByName(scheme);
  if (!parsed) throw ConfigError("unknown scheme '" + scheme + "'");
  c.scheme = *parsed;
  c.seed = j.value("seed", d.seed);
}

}  // namespace coins

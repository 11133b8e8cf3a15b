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

#ifndef COINS_AGENTS_LEARNER_H_
#define COINS_AGENTS_LEARNER_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "coins/agents/network.h"
#include "coins/env/task_config.h"
#include "json.hpp"

namespace coins {

// Advantage actor-critic hyperparameters. These are desk-scale defaults,
// not tuned reproductions of a large distributed run.
struct LearnerConfig {
  double discount = 0.95;
  int rollout_length = 16;
  double learning_rate = 1e-3;
  double entropy_coefficient = 0.01;
  double value_loss_weight = 0.5;
  double max_grad_norm = 1.0;
  int feature_radius = 5;  // egocentric window radius
  int hidden_units = 64;
  // Environment steps summed over all parallel environments.
  int64_t total_steps = 200000;
  int64_t checkpoint_interval = 50000;
  int parallel_envs = 16;
  // Rollout threads. Each environment owns its random streams, so results do
  // not depend on this value; 1 runs everything on the calling thread.
  int workers = 1;

  void Validate() const;
};

void to_json(nlohmann::json& j, const LearnerConfig& c);
void from_json(const nlohmann::json& j, LearnerConfig& c);

struct AgentCheckpoint {
  double theta = 0.0;
  ActorCriticNet net;
};

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  int version = kCheckpointVersion;
  int64_t steps = 0;
  uint64_t seed = 0;
  LearnerConfig learner;
  TaskConfig task;
  std::vector<AgentCheckpoint> agents;
  // Mean undiscounted environment return per finished training episode since
  // the previous checkpoint, per agent (empty when none finished).
  std::vector<double> recent_env_return;
};

nlohmann::json CheckpointToJson(const Checkpoint& c);
Checkpoint CheckpointFromJson(const nlohmann::json& j);
void SaveCheckpoint(const Checkpoint& c, const std::string& path);
// Throws ConfigError on a missing file, bad JSON or unsupported version.
Checkpoint LoadCheckpoint(const std::string& path);

using CheckpointCallback = std::function<void(const Checkpoint&)>;

// Self-play A2C. Each agent has its own network and optimises its SVO
// utility of the per-step environment rewards. No trembling hand is applied
// during training. Emits a checkpoint at step 0, every checkpoint_interval
// steps and at the end. Deterministic given `seed`. Throws NumericalError if
// the value loss becomes non-finite.
std::vector<Checkpoint> TrainSelfPlay(const TaskConfig& task,
                                      std::span<const double> thetas,
                                      const LearnerConfig& learner,
                                      uint64_t seed,
                                      const CheckpointCallback& on_checkpoint = {});

}  // namespace coins

#endif  // COINS_AGENTS_LEARNER_H_

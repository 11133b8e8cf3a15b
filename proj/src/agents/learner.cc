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

#include "coins/agents/learner.h"

#include <cmath>
#include <fstream>
#include <thread>

#include "coins/agents/policy.h"
#include "coins/agents/svo.h"
#include "coins/env/game.h"
#include "coins/env/observation.h"
#include "coins/errors.h"

namespace coins {

void LearnerConfig::Validate() const {
  if (!(discount >= 0.0 && discount < 1.0)) {
    throw ConfigError("discount must lie in [0, 1)");
  }
  if (rollout_length < 1 || parallel_envs < 1 || workers < 1) {
    throw ConfigError("rollout_length, parallel_envs and workers must be >= 1");
  }
  if (!(learning_rate > 0.0) || entropy_coefficient < 0.0 ||
      value_loss_weight < 0.0 || !(max_grad_norm > 0.0)) {
    throw ConfigError("invalid optimiser coefficients");
  }
  if (feature_radius < 1 || hidden_units < 1) {
    throw ConfigError("feature_radius and hidden_units must be >= 1");
  }
  if (total_steps < 0 || checkpoint_interval < 1) {
    throw ConfigError("total_steps must be >= 0, checkpoint_interval >= 1");
  }
}

void to_json(nlohmann::json& j, const LearnerConfig& c) {
  j = {{"discount", c.discount},
       {"rollout_length", c.rollout_length},
       {"learning_rate", c.learning_rate},
       {"entropy_coefficient", c.entropy_coefficient},
       {"value_loss_weight", c.value_loss_weight},
       {"max_grad_norm", c.max_grad_norm},
       {"feature_radius", c.feature_radius},
       {"hidden_units", c.hidden_units},
       {"total_steps", c.total_steps},
       {"checkpoint_interval", c.checkpoint_interval},
       {"parallel_envs", c.parallel_envs},
       {"workers", c.workers}};
}

void from_json(const nlohmann::json& j, LearnerConfig& c) {
  const LearnerConfig d;
  c.discount = j.value("discount", d.discount);
  c.rollout_length = j.value("rollout_length", d.rollout_length);
  c.learning_rate = j.value("learning_rate", d.learning_rate);
  c.entropy_coefficient = j.value("entropy_coefficient", d.entropy_coefficient);
  c.value_loss_weight = j.value("value_loss_weight", d.value_loss_weight);
  c.max_grad_norm = j.value("max_grad_norm", d.max_grad_norm);
  c.feature_radius = j.value("feature_radius", d.feature_radius);
  c.hidden_units = j.value("hidden_units", d.hidden_units);
  c.total_steps = j.value("total_steps", d.total_steps);
  c.checkpoint_interval = j.value("checkpoint_interval", d.checkpoint_interval);
  c.parallel_envs = j.value("parallel_envs", d.parallel_envs);
  c.workers = j.value("workers", d.workers);
}

nlohmann::json CheckpointToJson(const Checkpoint& c) {
  nlohmann::json agents = nlohmann::json::array();
  for (const AgentCheckpoint& a : c.agents) {
    agents.push_back({{"theta", a.theta}, {"network", a.net.ToJson()}});
  }
  return {{"format", "coins-checkpoint"},
          {"version", c.version},
          {"steps", c.steps},
          {"seed", c.seed},
          {"learner", c.learner},
          {"task", c.task},
          {"recent_env_return", c.recent_env_return},
          {"agents", agents}};
}

Checkpoint CheckpointFromJson(const nlohmann::json& j) {
  if (j.value("format", std::string()) != "coins-checkpoint") {
    throw ConfigError("not a coins checkpoint");
  }
  Checkpoint c;
  c.version = j.at("version").get<int>();
  if (c.version != kCheckpointVersion) {
    throw ConfigError("unsupported checkpoint version " +
                      std::to_string(c.version));
  }
  c.steps = j.at("steps").get<int64_t>();
  c.seed = j.at("seed").get<uint64_t>();
  c.learner = j.at("learner").get<LearnerConfig>();
  c.task = j.at("task").get<TaskConfig>();
  c.recent_env_return = j.value("recent_env_return", std::vector<double>{});
  for (const auto& a : j.at("agents")) {
    c.agents.push_back(
        {a.at("theta").get<double>(), ActorCriticNet::FromJson(a.at("network"))});
  }
  return c;
}

void SaveCheckpoint(const Checkpoint& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write checkpoint " + path);
  out << CheckpointToJson(c).dump() << '\n';
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("missing checkpoint " + path);
  try {
    return CheckpointFromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed checkpoint " + path + ": " + e.what());
  }
}

namespace {

constexpr uint64_t kNetInitStream = 10;
constexpr uint64_t kEpisodeStream = 1000;
constexpr uint64_t kActionStream = 100000;

struct Sample {
  std::vector<int> active;
  ActorCriticNet::Activations act;
  Action action = Action::kNoOp;
  double reward = 0.0;
  bool done = false;
};

struct EnvSlot {
  GameState state;
  uint64_t episode_seed_base = 0;
  int64_t episode = 0;
  std::vector<Rng> action_rngs;
  std::vector<double> episode_return;
  std::vector<std::vector<double>> finished_returns;  // per agent
  std::vector<std::vector<Sample>> samples;           // per agent
  std::vector<double> bootstrap;                      // per agent
};

void ResetEpisode(EnvSlot& slot, const TaskConfig& task) {
  slot.state = GenerateRoom(task, DeriveSeed(slot.episode_seed_base, slot.episode));
  ++slot.episode;
  std::fill(slot.episode_return.begin(), slot.episode_return.end(), 0.0);
}

void CollectRollout(EnvSlot& slot, const TaskConfig& task,
                    std::span<const double> thetas,
                    const std::vector<ActorCriticNet>& nets, int length) {
  const int n = static_cast<int>(nets.size());
  for (auto& s : slot.samples) s.clear();
  std::vector<Action> joint(n);
  std::vector<double> others;
  for (int t = 0; t < length; ++t) {
    for (int i = 0; i < n; ++i) {
      Sample sample;
      sample.active = EncodeFeatures(
          Observe(slot.state, i, Frame::kEgocentric, nets[i].radius()));
      sample.act = nets[i].Run(sample.active);
      sample.action = static_cast<Action>(
          SampleCategorical(sample.act.probs, slot.action_rngs[i]));
      joint[i] = sample.action;
      slot.samples[i].push_back(std::move(sample));
    }
    const StepOutcome out = Step(slot.state, joint, task);
    for (int i = 0; i < n; ++i) {
      others.clear();
      for (int j = 0; j < n; ++j) {
        if (j != i) others.push_back(out.rewards[j]);
      }
      Sample& s = slot.samples[i].back();
      s.reward = SvoUtility(out.rewards[i], others, thetas[i]);
      s.done = out.terminal;
      slot.episode_return[i] += out.rewards[i];
    }
    if (out.terminal) {
      for (int i = 0; i < n; ++i) {
        slot.finished_returns[i].push_back(slot.episode_return[i]);
      }
      ResetEpisode(slot, task);
    }
  }
  for (int i = 0; i < n; ++i) {
    const auto active = EncodeFeatures(
        Observe(slot.state, i, Frame::kEgocentric, nets[i].radius()));
    slot.bootstrap[i] = nets[i].Run(active).value;
  }
}

}  // namespace

std::vector<Checkpoint> TrainSelfPlay(const TaskConfig& task,
                                      std::span<const double> thetas,
                                      const LearnerConfig& learner,
                                      uint64_t seed,
                                      const CheckpointCallback& on_checkpoint) {
  task.Validate();
  learner.Validate();
  if (task.n_players != 2) throw ConfigError("self-play needs n_players = 2");
  if (static_cast<int>(thetas.size()) != task.n_players) {
    throw ConfigError("one SVO angle per agent expected");
  }
  for (double theta : thetas) SvoUtility(0.0, {}, theta);  // range check

  const int n = task.n_players;
  std::vector<ActorCriticNet> nets;
  std::vector<AdamOptimizer> optimizers;
  for (int i = 0; i < n; ++i) {
    nets.emplace_back(learner.feature_radius, learner.hidden_units,
                      DeriveSeed(seed, kNetInitStream + i));
  }
  for (int i = 0; i < n; ++i) optimizers.emplace_back(nets[i], learner.learning_rate);

  std::vector<EnvSlot> envs(learner.parallel_envs);
  for (int e = 0; e < learner.parallel_envs; ++e) {
    EnvSlot& slot = envs[e];
    slot.episode_seed_base = DeriveSeed(seed, kEpisodeStream + e);
    for (int i = 0; i < n; ++i) {
      slot.action_rngs.emplace_back(
          DeriveSeed(seed, kActionStream + static_cast<uint64_t>(e) * 16 + i));
    }
    slot.episode_return.assign(n, 0.0);
    slot.finished_returns.resize(n);
    slot.samples.resize(n);
    slot.bootstrap.assign(n, 0.0);
    ResetEpisode(slot, task);
  }

  std::vector<Checkpoint> series;
  auto emit = [&](int64_t steps) {
    Checkpoint c;
    c.steps = steps;
    c.seed = seed;
    c.learner = learner;
    c.task = task;
    for (int i = 0; i < n; ++i) c.agents.push_back({thetas[i], nets[i]});
    for (int i = 0; i < n; ++i) {
      double sum = 0.0;
      size_t count = 0;
      for (EnvSlot& slot : envs) {
        for (double r : slot.finished_returns[i]) sum += r;
        count += slot.finished_returns[i].size();
        slot.finished_returns[i].clear();
      }
      if (count > 0) c.recent_env_return.push_back(sum / count);
    }
    if (on_checkpoint) on_checkpoint(c);
    series.push_back(std::move(c));
  };

  emit(0);
  int64_t steps = 0;
  int64_t next_checkpoint = learner.checkpoint_interval;
  const int workers = std::min(learner.workers, learner.parallel_envs);
  const int64_t per_rollout =
      static_cast<int64_t>(learner.rollout_length) * learner.parallel_envs;
  const double batch = static_cast<double>(per_rollout);

  while (steps < learner.total_steps) {
    if (workers == 1) {
      for (EnvSlot& slot : envs) {
        CollectRollout(slot, task, thetas, nets, learner.rollout_length);
      }
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (size_t e = w; e < envs.size(); e += workers) {
            CollectRollout(envs[e], task, thetas, nets, learner.rollout_length);
          }
        });
      }
      for (auto& t : pool) t.join();
    }
    steps += per_rollout;

    for (int i = 0; i < n; ++i) {
      ActorCriticNet::Gradients grads;
      grads.SetZero(nets[i]);
      double value_loss = 0.0;
      for (EnvSlot& slot : envs) {
        std::vector<Sample>& samples = slot.samples[i];
        double ret = slot.bootstrap[i];
        for (int t = static_cast<int>(samples.size()) - 1; t >= 0; --t) {
          const Sample& s = samples[t];
          ret = s.reward + learner.discount * (s.done ? 0.0 : ret);
          const double advantage = ret - s.act.value;
          value_loss += advantage * advantage / batch;

          const ActionLogits log_probs = s.act.probs.array().max(1e-300).log().matrix();
          const double entropy = -s.act.probs.dot(log_probs);
          ActionLogits d_logits = advantage * s.act.probs;
          d_logits[static_cast<int>(s.action)] -= advantage;
          d_logits += learner.entropy_coefficient *
                      s.act.probs.cwiseProduct(log_probs.array().matrix() +
                                               ActionLogits::Constant(entropy));
          d_logits /= batch;
          const double d_value =
              2.0 * learner.value_loss_weight * (s.act.value - ret) / batch;
          nets[i].Backward(s.active, s.act, d_logits, d_value, grads);
        }
      }
      if (!std::isfinite(value_loss)) {
        throw NumericalError("value loss diverged at step " + std::to_string(steps));
      }
      const double norm = std::sqrt(grads.SquaredNorm());
      if (norm > learner.max_grad_norm) grads.Scale(learner.max_grad_norm / norm);
      optimizers[i].Apply(grads, nets[i]);
    }

    if (steps >= next_checkpoint && steps < learner.total_steps) {
      emit(steps);
      while (next_checkpoint <= steps) next_checkpoint += learner.checkpoint_interval;
    }
  }
  if (steps > 0) emit(steps);
  return series;
}

}  // namespace coins

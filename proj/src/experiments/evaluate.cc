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

#include "coins/experiments/evaluate.h"

#include <cmath>
#include <fstream>
#include <numeric>
#include <thread>

#include "coins/env/game.h"
#include "coins/env/observation.h"
#include "coins/errors.h"

namespace coins {

MetricSummary Summarize(std::span<const double> values) {
  MetricSummary s;
  s.n = static_cast<int>(values.size());
  if (s.n == 0) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / s.n;
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / (s.n - 1));
  }
  s.ci_half_width = 1.96 * s.sd / std::sqrt(static_cast<double>(s.n));
  return s;
}

EpisodeMetrics RunEpisode(std::span<const Agent> agents, const TaskConfig& config,
                          uint64_t episode_seed, EpisodeLogWriter* log) {
  const int n = config.n_players;
  if (static_cast<int>(agents.size()) != n) {
    throw UsageError("one agent per player expected");
  }
  GameState state = GenerateRoom(config, DeriveSeed(episode_seed, 0));
  if (log) log->Begin(state, config, episode_seed);
  std::vector<Rng> rngs;
  std::vector<PolicyMemory> memory(n);
  for (int i = 0; i < n; ++i) rngs.emplace_back(DeriveSeed(episode_seed, 1 + i));

  EpisodeMetrics m;
  m.player_returns.assign(n, 0);
  std::vector<Action> joint(n);
  while (!state.terminal()) {
    for (int i = 0; i < n; ++i) {
      const Policy& policy = *agents[i].policy;
      const Observation obs = Observe(state, i, policy.frame(), policy.radius());
      joint[i] = agents[i].Act(obs, memory[i], rngs[i]);
    }
    const StepOutcome out = Step(state, joint, config);
    if (log) log->Record(state, joint, out);
    for (const CollectionEvent& e : out.events) {
      ++m.total_coins;
      if (e.matching) {
        ++m.matching_coins;
      } else {
        ++m.mismatching_coins;
      }
    }
    for (int i = 0; i < n; ++i) {
      m.player_returns[i] += out.rewards[i];
      m.collective_return += out.rewards[i];
    }
  }
  return m;
}

PairMetrics EvaluatePair(const Agent& a, const Agent& b, const TaskConfig& config,
                         int episodes, uint64_t seed, int workers) {
  if (episodes < 1) throw ConfigError("episodes must be >= 1");
  if (config.n_players != 2) throw ConfigError("pair evaluation needs 2 players");
  const std::vector<Agent> agents = {a, b};
  PairMetrics result;
  result.episodes.resize(episodes);
  auto run = [&](int k) {
    result.episodes[k] = RunEpisode(agents, config, DeriveSeed(seed, k));
  };
  workers = std::max(1, std::min(workers, episodes));
  if (workers == 1) {
    for (int k = 0; k < episodes; ++k) run(k);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int k = w; k < episodes; k += workers) run(k);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<double> total, mismatching, collective;
  for (const EpisodeMetrics& m : result.episodes) {
    total.push_back(m.total_coins);
    mismatching.push_back(m.mismatching_coins);
    collective.push_back(m.collective_return);
  }
  result.total_coins = Summarize(total);
  result.mismatching_coins = Summarize(mismatching);
  result.collective_return = Summarize(collective);
  return result;
}

std::vector<EpisodeMetrics> LogEpisodes(const Agent& a, const Agent& b, const TaskConfig& config,
                                        int episodes, uint64_t seed, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write episode log '" + path + "'");
  EpisodeLogWriter log(out);
  const std::vector<Agent> agents = {a, b};
  std::vector<EpisodeMetrics> metrics;
  for (int k = 0; k < episodes; ++k) {
    metrics.push_back(RunEpisode(agents, config, DeriveSeed(seed, k), &log));
  }
  return metrics;
}

}  // namespace coins

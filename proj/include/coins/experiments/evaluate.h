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

#ifndef COINS_EXPERIMENTS_EVALUATE_H_
#define COINS_EXPERIMENTS_EVALUATE_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coins/agents/policy.h"
#include "coins/env/episode_log.h"
#include "coins/env/task_config.h"

namespace coins {

// Mean, sample standard deviation and the half-width of the normal
// approximation 95% interval, 1.96 * sd / sqrt(n).
struct MetricSummary {
  double mean = 0.0;
  double sd = 0.0;
  double ci_half_width = 0.0;
  int n = 0;

  double lower() const { return mean - ci_half_width; }
  double upper() const { return mean + ci_half_width; }
  bool Contains(double x) const { return lower() <= x && x <= upper(); }
  friend bool operator==(const MetricSummary&, const MetricSummary&) = default;
};

MetricSummary Summarize(std::span<const double> values);

struct EpisodeMetrics {
  int total_coins = 0;
  int matching_coins = 0;
  int mismatching_coins = 0;
  // Sum of environment (never shaped) rewards over all players.
  int collective_return = 0;
  std::vector<int> player_returns;
  friend bool operator==(const EpisodeMetrics&, const EpisodeMetrics&) = default;
};

struct PairMetrics {
  std::vector<EpisodeMetrics> episodes;
  MetricSummary total_coins;
  MetricSummary mismatching_coins;
  MetricSummary collective_return;
};

// Plays one episode. Agent i controls player i; `agents.size()` must equal
// config.n_players. `episode_seed` fixes the room and every policy stream.
EpisodeMetrics RunEpisode(std::span<const Agent> agents, const TaskConfig& config,
                          uint64_t episode_seed, EpisodeLogWriter* log = nullptr);

// Runs `episodes` independently seeded episodes of agent a (player 0) with
// agent b (player 1). Episode k depends only on (seed, k), so the result is
// identical for any number of workers.
PairMetrics EvaluatePair(const Agent& a, const Agent& b, const TaskConfig& config,
                         int episodes, uint64_t seed, int workers = 1);

// Replays the first `episodes` episodes of EvaluatePair(a, b, config, _, seed)
// and writes their JSON-lines logs to `path`. Returns the per-episode metrics,
// which equal the corresponding EvaluatePair episodes.
std::vector<EpisodeMetrics> LogEpisodes(const Agent& a, const Agent& b, const TaskConfig& config,
                                        int episodes, uint64_t seed, const std::string& path);

}  // namespace coins

#endif  // COINS_EXPERIMENTS_EVALUATE_H_

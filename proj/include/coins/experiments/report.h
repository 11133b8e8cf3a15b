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

#ifndef COINS_EXPERIMENTS_REPORT_H_
#define COINS_EXPERIMENTS_REPORT_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "coins/agents/learner.h"
#include "coins/experiments/evaluate.h"
#include "json.hpp"

namespace coins {

struct EvalRow {
  std::string series;
  int64_t steps_trained = 0;
  double epsilon = 0.0;
  int episodes = 0;
  MetricSummary total_coins;
  MetricSummary mismatching_coins;
  MetricSummary collective_return;
  friend bool operator==(const EvalRow&, const EvalRow&) = default;
};

struct EvalReport {
  int episodes_per_point = 100;
  std::vector<EvalRow> rows;
  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

inline const std::vector<double> kDefaultEpsilons = {0.0, 0.25, 0.5, 0.75, 1.0};

struct NamedPair {
  std::string name;
  PolicySpec a;
  PolicySpec b;
};

// Every pair is evaluated at every epsilon (applied to both agents), all
// points sharing the same master seed so points are paired comparisons.
// Throws ConfigError for epsilon outside [0, 1].
EvalReport EpsilonSweep(const std::vector<NamedPair>& pairs,
                        const TaskConfig& config,
                        const std::vector<double>& epsilons, int episodes,
                        uint64_t seed, int workers = 1);

// One row per checkpoint: its two agents play each other with the given
// trembling probability.
EvalReport EvaluateCheckpoints(const std::vector<std::string>& checkpoint_paths,
                               const std::string& series,
                               const TaskConfig& config, double epsilon,
                               int episodes, uint64_t seed, int workers = 1);

// Lossless tabular dumps. CSV columns, in order:
//   series,steps_trained,epsilon,episodes,
//   total_coins_{mean,sd,ci},mismatching_coins_{mean,sd,ci},
//   collective_return_{mean,sd,ci}
std::string ReportToCsv(const EvalReport& report);
EvalReport ReportFromCsv(const std::string& csv);
nlohmann::json ReportToJson(const EvalReport& report);
// Line chart of one metric against steps_trained (or epsilon when every row
// has steps_trained == 0), one line per series with a shaded 95% band.
std::string ReportToSvg(const EvalReport& report,
                        const std::string& metric = "collective_return");

enum class ReportFormat { kCsv, kJson, kSvg };
// Writes `report` to `path`; throws ConfigError when the path is unwritable.
void EmitReport(const EvalReport& report, ReportFormat format,
                const std::string& path);

}  // namespace coins

#endif  // COINS_EXPERIMENTS_REPORT_H_

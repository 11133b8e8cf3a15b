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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "coins/agents/policy.h"
#include "coins/env/episode_log.h"
#include "coins/errors.h"
#include "coins/experiments/evaluate.h"
#include "coins/experiments/report.h"
#include "coins/util/csv.h"
#include "doctest.h"

namespace coins {
namespace {

Agent Scripted(double theta, double epsilon) {
  return Agent::FromSpec(PolicySpec::Scripted(theta, epsilon));
}

Agent NoOp() {
  PolicySpec s;
  s.kind = PolicySpec::Kind::kNoOp;
  return Agent::FromSpec(s);
}

TEST_CASE("summaries use the normal approximation") {
  const std::vector<double> xs = {1, 2, 3, 4};
  const MetricSummary m = Summarize(xs);
  CHECK(m.mean == 2.5);
  const double sd = std::sqrt(5.0 / 3.0);
  CHECK(m.sd == doctest::Approx(sd).epsilon(1e-14));
  CHECK(m.ci_half_width == doctest::Approx(1.96 * sd / 2.0).epsilon(1e-14));
  CHECK(m.n == 4);
  const std::vector<double> one = {7};
  CHECK(Summarize(one).sd == 0.0);
}

TEST_CASE("no-op pair without spawning scores nothing") {
  TaskConfig c = TaskConfig::Coplay();
  c.spawn_prob = 0.0;
  const PairMetrics m = EvaluatePair(NoOp(), NoOp(), c, 20, 1);
  CHECK(m.total_coins.mean == 0.0);
  CHECK(m.total_coins.sd == 0.0);
  CHECK(m.mismatching_coins.mean == 0.0);
  CHECK(m.collective_return.mean == 0.0);
  CHECK_THROWS_AS(EvaluatePair(NoOp(), NoOp(), c, 0, 1), ConfigError);
}

TEST_CASE("greedy selfish pair: collective return CI contains zero") {
  const PairMetrics m =
      EvaluatePair(Scripted(0, 0), Scripted(0, 0), TaskConfig::Coplay(), 300, 2024);
  MESSAGE("selfish collective return " << m.collective_return.mean << " +/- "
                                       << m.collective_return.ci_half_width);
  CHECK(m.total_coins.mean > 0);
  CHECK(m.collective_return.Contains(0.0));
}

TEST_CASE("prosocial pair never mismatches") {
  const PairMetrics m =
      EvaluatePair(Scripted(45, 0), Scripted(45, 0), TaskConfig::Coplay(), 100, 5);
  CHECK(m.total_coins.mean > 0);
  for (const EpisodeMetrics& e : m.episodes) {
    CHECK(e.mismatching_coins == 0);
    CHECK(e.collective_return == e.total_coins);
  }
}

TEST_CASE("collective return identity on every episode") {
  TaskConfig canonical = TaskConfig::Coplay();
  canonical.spawn_prob = 0.01;
  TaskConfig offset = canonical;
  offset.scheme = RewardScheme::Offset();
  const PairMetrics a = EvaluatePair(Scripted(0, 0.5), Scripted(45, 0.25), canonical, 50, 8);
  const PairMetrics b = EvaluatePair(Scripted(0, 0.5), Scripted(45, 0.25), offset, 50, 8);
  for (int k = 0; k < 50; ++k) {
    const EpisodeMetrics& x = a.episodes[k];
    CHECK(x.collective_return == x.matching_coins - x.mismatching_coins);
    CHECK(x.player_returns[0] + x.player_returns[1] == x.collective_return);
    const EpisodeMetrics& y = b.episodes[k];
    CHECK(y.collective_return == 5 * y.matching_coins + 3 * y.mismatching_coins);
    // Offsetting rewards does not change the scripted dynamics.
    CHECK(y.total_coins == x.total_coins);
  }
}

TEST_CASE("evaluation is invariant to worker count and episode order") {
  const TaskConfig c = TaskConfig::Coplay();
  const PairMetrics one = EvaluatePair(Scripted(0, 0.25), Scripted(45, 0.5), c, 40, 17, 1);
  const PairMetrics four = EvaluatePair(Scripted(0, 0.25), Scripted(45, 0.5), c, 40, 17, 4);
  CHECK(one.episodes == four.episodes);
  CHECK(one.collective_return == four.collective_return);
  std::vector<double> returns;
  for (const auto& e : one.episodes) returns.push_back(e.collective_return);
  std::reverse(returns.begin(), returns.end());
  CHECK(Summarize(returns).mean == doctest::Approx(one.collective_return.mean).epsilon(1e-14));
}

TEST_CASE("episode logs agree with episode metrics") {
  TaskConfig c = TaskConfig::Coplay();
  c.spawn_prob = 0.01;
  const std::vector<Agent> agents = {Scripted(0, 0.3), Scripted(0, 0.3)};
  std::ostringstream out;
  EpisodeLogWriter writer(out);
  const EpisodeMetrics m = RunEpisode(agents, c, 99, &writer);
  std::istringstream in(out.str());
  std::string line;
  int matching = 0, mismatching = 0, collective = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    if (j["type"] != "step") continue;
    for (const auto& ev : j["events"]) (ev["matching"].get<bool>() ? matching : mismatching)++;
    for (const auto& r : j["rewards"]) collective += r.get<int>();
  }
  CHECK(matching == m.matching_coins);
  CHECK(mismatching == m.mismatching_coins);
  CHECK(collective == m.collective_return);
  CHECK(collective == matching - mismatching);
}

std::vector<NamedPair> ScriptedPairs() {
  return {{"selfish", PolicySpec::Scripted(0, 0), PolicySpec::Scripted(0, 0)},
          {"prosocial", PolicySpec::Scripted(45, 0), PolicySpec::Scripted(45, 0)}};
}

const EvalRow& Find(const EvalReport& r, const std::string& series, double eps) {
  for (const EvalRow& row : r.rows) {
    if (row.series == series && row.epsilon == eps) return row;
  }
  FAIL("missing row");
  return r.rows.front();
}

TEST_CASE("epsilon sweep degrades scripted pairs") {
  const EvalReport r =
      EpsilonSweep(ScriptedPairs(), TaskConfig::Coplay(), kDefaultEpsilons, 100, 3);
  REQUIRE(r.rows.size() == 10);
  for (const std::string s : {"selfish", "prosocial"}) {
    const EvalRow& lo = Find(r, s, 0.0);
    const EvalRow& hi = Find(r, s, 1.0);
    CHECK(lo.total_coins.lower() > hi.total_coins.upper());
    for (size_t i = 1; i < kDefaultEpsilons.size(); ++i) {
      CHECK(Find(r, s, kDefaultEpsilons[i]).total_coins.mean <=
            Find(r, s, kDefaultEpsilons[i - 1]).total_coins.mean);
    }
  }
  CHECK(Find(r, "prosocial", 0.0).mismatching_coins.mean == 0.0);
  CHECK(Find(r, "prosocial", 1.0).mismatching_coins.mean > 0.0);
  const std::vector<double> bad = {0.0, 1.5};
  CHECK_THROWS_AS(EpsilonSweep(ScriptedPairs(), TaskConfig::Coplay(), bad, 10, 3),
                  ConfigError);
}

TEST_CASE("duplicated epsilon gives identical statistics") {
  const std::vector<double> eps = {0.25, 0.25};
  const EvalReport r = EpsilonSweep(ScriptedPairs(), TaskConfig::Coplay(), eps, 30, 4);
  REQUIRE(r.rows.size() == 4);
  CHECK(r.rows[0].total_coins == r.rows[1].total_coins);
  CHECK(r.rows[0].collective_return == r.rows[1].collective_return);
}

TEST_CASE("report csv") {
  EvalReport empty;
  const CsvTable header_only = ParseCsv(ReportToCsv(empty));
  CHECK(header_only.rows.empty());
  REQUIRE(header_only.header.size() == 13);
  CHECK(header_only.header[0] == "series");
  CHECK(header_only.header[12] == "collective_return_ci");

  EvalReport r;
  r.episodes_per_point = 7;
  for (int i = 0; i < 3; ++i) {
    EvalRow row;
    row.series = i == 1 ? "quoted, \"name\"" : "s";
    row.steps_trained = 1000 * i;
    row.epsilon = 0.1 * i;
    row.episodes = 7;
    row.total_coins = {1.0 / 3.0 + i, std::sqrt(2.0), 0.1 + 1e-17, 7};
    row.mismatching_coins = {-1e-300, 1e300, 2.5e-8, 7};
    row.collective_return = {std::numbers::pi, std::exp(1.0), 1.0 / 7.0, 7};
    r.rows.push_back(row);
  }
  const std::string csv = ReportToCsv(r);
  const CsvTable t = ParseCsv(csv);
  CHECK(t.rows.size() == 3);
  CHECK(t.header == header_only.header);
  const EvalReport back = ReportFromCsv(csv);
  REQUIRE(back.rows.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(back.rows[i].series == r.rows[i].series);
    CHECK(std::abs(back.rows[i].total_coins.mean - r.rows[i].total_coins.mean) < 1e-12);
    CHECK(std::abs(back.rows[i].collective_return.sd - r.rows[i].collective_return.sd) < 1e-12);
    CHECK(back.rows[i].mismatching_coins.sd == r.rows[i].mismatching_coins.sd);
  }
  CHECK(ReportToCsv(back) == csv);
}

TEST_CASE("reports are byte identical for a fixed seed") {
  const std::vector<double> eps = {0.0, 0.5};
  const EvalReport a = EpsilonSweep(ScriptedPairs(), TaskConfig::Coplay(), eps, 20, 11);
  const EvalReport b = EpsilonSweep(ScriptedPairs(), TaskConfig::Coplay(), eps, 20, 11);
  CHECK(ReportToCsv(a) == ReportToCsv(b));
  CHECK(ReportToJson(a).dump() == ReportToJson(b).dump());
  CHECK(ReportToSvg(a) == ReportToSvg(b));
}

TEST_CASE("emit report") {
  const std::vector<double> eps = {0.0, 1.0};
  const EvalReport r = EpsilonSweep(ScriptedPairs(), TaskConfig::Coplay(), eps, 5, 1);
  const auto dir = std::filesystem::temp_directory_path() / "coins_experiments_test";
  std::filesystem::create_directories(dir);
  EmitReport(r, ReportFormat::kCsv, (dir / "r.csv").string());
  EmitReport(r, ReportFormat::kJson, (dir / "r.json").string());
  EmitReport(r, ReportFormat::kSvg, (dir / "r.svg").string());
  std::ifstream svg(dir / "r.svg");
  std::string first;
  std::getline(svg, first);
  CHECK(first.find("<svg") != std::string::npos);
  CHECK(ReportFromCsv(ReadCsvFile((dir / "r.csv").string()).ToString()) == r);
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(EmitReport(r, ReportFormat::kCsv, "/nonexistent/dir/r.csv"), ConfigError);
}

TEST_CASE("episode logs reproduce the evaluated episodes") {
  TaskConfig c = TaskConfig::Coplay();
  c.spawn_prob = 0.01;
  c.scheme = RewardScheme::Offset();
  const Agent a = Agent::FromSpec(PolicySpec::Scripted(0, 0.5));
  const Agent b = Agent::FromSpec(PolicySpec::Scripted(45, 0.5));
  const PairMetrics m = EvaluatePair(a, b, c, 6, 21, 3);
  const auto path = std::filesystem::temp_directory_path() / "coins_episode_log.jsonl";
  const std::vector<EpisodeMetrics> logged = LogEpisodes(a, b, c, 4, 21, path.string());
  REQUIRE(logged.size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(logged[k] == m.episodes[k]);

  // Recompute the collective return of each episode from its log alone.
  std::ifstream in(path);
  std::string line;
  std::vector<int> from_log;
  std::vector<std::pair<int, int>> counts;
  while (std::getline(in, line)) {
    const nlohmann::json r = nlohmann::json::parse(line);
    if (r["type"] == "room") {
      from_log.push_back(0);
      counts.emplace_back(0, 0);
      continue;
    }
    REQUIRE(r["type"] == "step");
    CHECK(r.contains("joint_action"));
    CHECK(r.contains("rng_draws_count"));
    for (int reward : r["rewards"]) from_log.back() += reward;
    for (const auto& e : r["events"]) (e["matching"] ? counts.back().first : counts.back().second)++;
  }
  REQUIRE(from_log.size() == 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(from_log[k] == m.episodes[k].collective_return);
    CHECK(from_log[k] == 5 * counts[k].first + 3 * counts[k].second);
  }
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace coins

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

#include "coins/study/export.h"

#include <algorithm>
#include <filesystem>

#include "coins/errors.h"
#include "coins/study/store.h"

namespace coins {
namespace {

std::string Num(double x) { return FormatDouble(x); }

std::vector<std::string> Keys(const Session& s) {
  return {std::to_string(static_cast<int>(s.config().variant)), s.init().session_id,
          s.init().participant_id};
}

std::vector<std::string> Concat(std::vector<std::string> a,
                                const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<std::string> AgentColumns(const Session& s, const std::string& label) {
  if (label.empty()) return {"", "", ""};
  const PolicySpec& spec = s.config().roster.at(label);
  return {label, Num(spec.svo.theta_degrees), Num(spec.tremble.epsilon)};
}

const std::vector<std::string> kKeyColumns = {"study", "session_id", "participant_id"};

}  // namespace

StudyTables EmptyStudyTables() {
  StudyTables t;
  t.ratings.header = Concat(kKeyColumns, {"episode", "co_player", "theta", "epsilon",
                                          "repetition", "trait", "value", "position"});
  t.preferences.header =
      Concat(kKeyColumns, {"prompt", "first_co_player", "second_co_player", "first_episode",
                           "second_episode", "value"});
  t.choices.header = Concat(kKeyColumns, {"co_player", "theta", "epsilon", "choice"});
  t.scores.header = Concat(kKeyColumns, {"episode", "kind", "co_player", "theta", "epsilon",
                                         "n_players", "steps", "points", "coins", "matching",
                                         "mismatching", "participant_coins"});
  t.impressions.header = Concat(kKeyColumns, {"co_player", "text", "empty"});
  t.sessions.header = Concat(kKeyColumns, {"seed", "phase", "complete", "coplay_points",
                                           "bonus_cents"});
  return t;
}

void AppendSession(const Session& s, StudyTables& t) {
  const std::vector<std::string> keys = Keys(s);
  std::map<std::string, int> repetitions;
  for (const PerceptionResponse& p : s.perceptions()) {
    const int rep = ++repetitions[p.co_player];
    const auto agent = AgentColumns(s, p.co_player);
    for (const auto& [trait, value] : p.items) {
      const auto pos = std::find(p.order.begin(), p.order.end(), trait) - p.order.begin();
      t.ratings.rows.push_back(Concat(
          keys, {std::to_string(p.episode), agent[0], agent[1], agent[2], std::to_string(rep),
                 trait, std::to_string(value), std::to_string(pos + 1)}));
    }
  }
  for (const PreferenceResponse& p : s.preferences()) {
    t.preferences.rows.push_back(
        Concat(keys, {std::to_string(p.index), p.first, p.second,
                      std::to_string(p.first_episode), std::to_string(p.second_episode),
                      std::to_string(p.value)}));
  }
  if (s.choice()) {
    const auto agent = AgentColumns(s, s.choice()->co_player);
    t.choices.rows.push_back(
        Concat(keys, {agent[0], agent[1], agent[2],
                      s.choice()->play_alone ? "play_alone" : "play_with_coplayer"}));
  }
  for (const EpisodeRecord& e : s.episodes()) {
    const auto agent = AgentColumns(s, e.co_player);
    t.scores.rows.push_back(Concat(
        keys, {std::to_string(e.index), EpisodeKindName(e.kind), agent[0], agent[1], agent[2],
               std::to_string(e.n_players), std::to_string(e.steps), std::to_string(e.points),
               std::to_string(e.coins), std::to_string(e.matching),
               std::to_string(e.mismatching), std::to_string(e.participant_coins)}));
  }
  for (const Impression& i : s.impressions()) {
    t.impressions.rows.push_back(
        Concat(keys, {i.co_player, i.text, i.text.empty() ? "1" : "0"}));
  }
  const bool settled = s.phase() == Phase::kDebrief || s.complete();
  t.sessions.rows.push_back(
      Concat(keys, {std::to_string(s.init().seed), PhaseName(s.phase()),
                    s.complete() ? "1" : "0", std::to_string(s.coplay_points()),
                    settled ? std::to_string(s.bonus_cents()) : ""}));
}

StudyTables ExportSessions(const std::string& log_dir) {
  if (!std::filesystem::is_directory(log_dir)) {
    throw ConfigError("log directory '" + log_dir + "' does not exist");
  }
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(log_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  StudyTables t = EmptyStudyTables();
  for (const std::string& f : files) {
    const auto records = ReadSessionLog(f);
    try {
      AppendSession(ReplaySession(records), t);
    } catch (const ValidationError& e) {
      throw ValidationError("'" + f + "': " + e.what());
    }
  }
  return t;
}

namespace {

const std::vector<std::pair<std::string, CsvTable StudyTables::*>> kFiles = {
    {"ratings.csv", &StudyTables::ratings},
    {"preferences.csv", &StudyTables::preferences},
    {"choices.csv", &StudyTables::choices},
    {"scores.csv", &StudyTables::scores},
    {"impressions.csv", &StudyTables::impressions},
    {"sessions.csv", &StudyTables::sessions}};

}  // namespace

void WriteStudyTables(const StudyTables& t, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  for (const auto& [name, member] : kFiles) {
    WriteCsvFile(t.*member, (std::filesystem::path(dir) / name).string());
  }
}

StudyTables ReadStudyTables(const std::string& dir) {
  StudyTables t;
  for (const auto& [name, member] : kFiles) {
    const auto path = std::filesystem::path(dir) / name;
    if (!std::filesystem::exists(path)) {
      throw ConfigError("missing table '" + path.string() + "'");
    }
    t.*member = ReadCsvFile(path.string());
  }
  return t;
}

}  // namespace coins

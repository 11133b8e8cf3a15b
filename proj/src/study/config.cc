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

#include "coins/study/config.h"

#include "coins/errors.h"

namespace coins {

std::string VariantName(StudyVariant v) {
  return "study" + std::to_string(static_cast<int>(v));
}

StudyVariant VariantFromNumber(int n) {
  if (n < 1 || n > 3) throw ConfigError("study must be 1, 2 or 3");
  return static_cast<StudyVariant>(n);
}

StudyConfig StudyConfig::ForVariant(StudyVariant variant, Roster roster) {
  StudyConfig c;
  c.variant = variant;
  c.roster = std::move(roster);
  const RewardScheme scheme = variant == StudyVariant::kStudy1
                                  ? RewardScheme::Canonical()
                                  : RewardScheme::Offset();
  c.bonus_per_point = variant == StudyVariant::kStudy1 ? 0.10 : 0.02;
  c.coplay = TaskConfig::Coplay();
  c.coplay.scheme = scheme;
  c.tutorial = TaskConfig::Tutorial();
  c.tutorial.scheme = scheme;
  return c;
}

void StudyConfig::Validate() const {
  const size_t min_agents = has_preferences() ? 2 : 1;
  if (roster.size() < min_agents || roster.size() > kNumColors - 1) {
    throw ConfigError(VariantName(variant) + " needs between " +
                      std::to_string(min_agents) + " and " +
                      std::to_string(kNumColors - 1) + " roster agents, got " +
                      std::to_string(roster.size()));
  }
  if (!(bonus_per_point >= 0.0)) throw ConfigError("bonus_per_point must be >= 0");
  if (tick_hz < 1) throw ConfigError("tick_hz must be >= 1");
  if (tutorial_coin_target < 1) throw ConfigError("tutorial_coin_target must be >= 1");
  if (resume_timeout_s < 0) throw ConfigError("resume_timeout_s must be >= 0");
  if (coplay.n_players != 2) throw ConfigError("co-play episodes have two players");
  if (tutorial.n_players != 1) throw ConfigError("the tutorial is played alone");
  coplay.Validate();
  tutorial.Validate();
}

void to_json(nlohmann::json& j, const StudyConfig& c) {
  j = {{"study", static_cast<int>(c.variant)},
       {"bonus_per_point", c.bonus_per_point},
       {"roster", RosterToJson(c.roster)},
       {"coplay", c.coplay},
       {"tutorial", c.tutorial},
       {"tutorial_coin_target", c.tutorial_coin_target},
       {"tick_hz", c.tick_hz},
       {"resume_timeout_s", c.resume_timeout_s}};
}

void from_json(const nlohmann::json& j, StudyConfig& c) {
  try {
    const StudyVariant v = VariantFromNumber(j.at("study").get<int>());
    Roster roster = j.contains("roster") ? RosterFromJson(j.at("roster")) : DefaultRoster();
    c = StudyConfig::ForVariant(v, std::move(roster));
    if (j.contains("bonus_per_point")) c.bonus_per_point = j.at("bonus_per_point").get<double>();
    if (j.contains("coplay")) from_json(j.at("coplay"), c.coplay);
    if (j.contains("tutorial")) from_json(j.at("tutorial"), c.tutorial);
    c.tutorial_coin_target = j.value("tutorial_coin_target", c.tutorial_coin_target);
    c.tick_hz = j.value("tick_hz", c.tick_hz);
    c.resume_timeout_s = j.value("resume_timeout_s", c.resume_timeout_s);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("study config: ") + e.what());
  }
  c.Validate();
}

}  // namespace coins

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

#ifndef COINS_STUDY_CONFIG_H_
#define COINS_STUDY_CONFIG_H_

#include <string>

#include "coins/agents/policy.h"
#include "coins/env/reward.h"
#include "coins/env/task_config.h"
#include "json.hpp"

namespace coins {

enum class StudyVariant { kStudy1 = 1, kStudy2 = 2, kStudy3 = 3 };

std::string VariantName(StudyVariant v);  // "study1", ...
StudyVariant VariantFromNumber(int n);   // throws ConfigError outside 1..3

struct StudyConfig {
  StudyVariant variant = StudyVariant::kStudy1;
  // Dollars per point, applied to co-play points only.
  double bonus_per_point = 0.10;
  Roster roster;
  TaskConfig coplay;
  TaskConfig tutorial;
  int tutorial_coin_target = 5;
  int tick_hz = 5;
  // How long a disconnected session may be resumed, in seconds.
  int resume_timeout_s = 900;

  // Study 1 plays the canonical scheme at $0.10/point; studies 2 and 3 play
  // the offset scheme at $0.02/point.
  static StudyConfig ForVariant(StudyVariant variant, Roster roster = DefaultRoster());

  bool has_preferences() const { return variant != StudyVariant::kStudy3; }
  bool has_partner_choice() const { return variant == StudyVariant::kStudy3; }

  // Roster of 2..4 agents for studies 1 and 2, 1..4 for study 3 (one color
  // per agent besides the participant's). Throws ConfigError.
  void Validate() const;
};

void to_json(nlohmann::json& j, const StudyConfig& c);
void from_json(const nlohmann::json& j, StudyConfig& c);

}  // namespace coins

#endif  // COINS_STUDY_CONFIG_H_

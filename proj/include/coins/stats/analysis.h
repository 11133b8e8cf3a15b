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

#ifndef COINS_STATS_ANALYSIS_H_
#define COINS_STATS_ANALYSIS_H_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coins/stats/anova.h"
#include "coins/stats/composite.h"
#include "coins/stats/glm.h"
#include "coins/study/config.h"
#include "coins/study/export.h"
#include "json.hpp"

namespace coins {

struct CoplayerSummary {
  std::string co_player;
  double theta = 0.0;
  double epsilon = 0.0;
  int n = 0;
  double warmth_mean = 0.0;
  double warmth_ci = 0.0;  // 1.96 standard errors
  double competence_mean = 0.0;
  double competence_ci = 0.0;
};

// Everything `analyze` reports for one study. Parts that cannot be computed
// from the data at hand (too few sessions, separation, ...) are absent and
// explained in `notes`.
struct StudyAnalysis {
  StudyVariant study = StudyVariant::kStudy1;
  int sessions = 0;
  CompositeResult composites;
  std::vector<CoplayerSummary> coplayers;
  std::map<std::string, IccResult> icc;  // per perception item
  std::optional<AnovaTable> trait_anova;
  std::map<std::string, double> reliability;  // Spearman-Brown, per composite
  std::map<std::string, AnovaTable> svo_tremble_anova;  // per composite
  // identity, score and perception models, plus a combined model that is
  // reported but not ranked.
  std::vector<std::pair<std::string, ModelFit>> models;
  std::vector<ModelComparisonRow> ranking;
  std::vector<std::string> notes;
};

// Runs the perception, reliability and preference analyses on exported
// tables, using only rows of the given study. Stated preferences (studies 1
// and 2) are modelled with fractional logits of the Likert value mapped to
// [0, 1] on differences second minus first; partner choice (study 3) with
// logistic regressions.
StudyAnalysis AnalyzeStudy(const StudyTables& tables, StudyVariant study);

nlohmann::json AnalysisToJson(const StudyAnalysis& analysis);

// Writes analysis.json, coefficients.csv, ranking.csv, icc.csv, anova.csv
// and composites.csv into `dir` (created if needed).
void WriteAnalysis(const StudyAnalysis& analysis, const std::string& dir);

}  // namespace coins

#endif  // COINS_STATS_ANALYSIS_H_

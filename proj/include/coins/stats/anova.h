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

#ifndef COINS_STATS_ANOVA_H_
#define COINS_STATS_ANOVA_H_

#include <string>
#include <vector>

#include "json.hpp"

namespace coins {

// One-way random-effects intraclass correlation for single ratings,
// ICC(1,1) = (MSB - MSW) / (MSB + (k - 1) MSW), with the F-based 95% interval
// and the p-value of the test MSB / MSW. Unequal group sizes use the mean k.
struct IccResult {
  std::string variant = "ICC(1,1) one-way random effects, single rating";
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double f = 0.0;
  double df_between = 0.0;
  double df_within = 0.0;
  double p = 0.0;
  double ms_between = 0.0;
  double ms_within = 0.0;
  double k = 0.0;
  int targets = 0;
};

// `groups[i]` holds the repeated ratings of target i. Throws ValidationError
// for fewer than two targets or no within-target replication and
// NumericalError when both mean squares are zero.
IccResult Icc(const std::vector<std::vector<double>>& groups);

struct AnovaRow {
  std::string effect;  // factor name, "a:b" for the interaction, or "residual"
  double ss = 0.0;
  double df = 0.0;
  double ms = 0.0;
  double f = 0.0;  // zero on the residual row
  double p = 0.0;
};

struct AnovaTable {
  std::vector<AnovaRow> rows;  // effects first, residual last
  const AnovaRow& Row(const std::string& effect) const;
};

// Fixed-effects one-way ANOVA over string-labelled groups.
AnovaTable OneWayAnova(const std::vector<double>& values, const std::vector<std::string>& group,
                       const std::string& name = "group");

// Fixed-effects two-way ANOVA with interaction. Sums of squares are type III
// (sum-to-zero coding), which equal the classical decomposition for balanced
// data. Throws ValidationError on an empty cell or mismatched lengths and
// NumericalError when the residual variance is zero or has no degrees of
// freedom.
AnovaTable TwoWayAnova(const std::vector<double>& values, const std::vector<std::string>& a,
                       const std::vector<std::string>& b, const std::string& name_a = "a",
                       const std::string& name_b = "b");

nlohmann::json IccToJson(const IccResult& r);
nlohmann::json AnovaToJson(const AnovaTable& t);

}  // namespace coins

#endif  // COINS_STATS_ANOVA_H_

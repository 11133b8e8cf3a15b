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

#include "coins/study/sequence.h"

#include <set>
#include <utility>

#include "coins/errors.h"

namespace coins {

EpisodePlan BuildCoplayerSequence(StudyVariant variant,
                                  const std::vector<std::string>& labels, Rng& rng) {
  if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size()) {
    throw ConfigError("roster labels must be distinct");
  }
  EpisodePlan plan;
  if (variant == StudyVariant::kStudy3) {
    if (labels.empty()) throw ConfigError("study3 needs at least one roster agent");
    plan.coplayers.push_back(labels[rng.UniformInt(static_cast<int>(labels.size()))]);
    plan.choice_slot = true;
    return plan;
  }
  if (labels.size() < 2) {
    throw ConfigError(VariantName(variant) + " needs at least two roster agents");
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  for (size_t i = 0; i < labels.size(); ++i) {
    for (size_t j = i + 1; j < labels.size(); ++j) pairs.emplace_back(labels[i], labels[j]);
  }
  for (size_t i = pairs.size(); i > 1; --i) {
    std::swap(pairs[i - 1], pairs[rng.UniformInt(static_cast<int>(i))]);
  }
  for (auto& [first, second] : pairs) {
    if (rng.UniformInt(2) == 1) std::swap(first, second);
    plan.coplayers.push_back(first);
    plan.coplayers.push_back(second);
    plan.preference_after.push_back(static_cast<int>(plan.coplayers.size()));
  }
  return plan;
}

}  // namespace coins

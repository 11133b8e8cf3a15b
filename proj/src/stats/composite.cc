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

#include "coins/stats/composite.h"

#include <map>
#include <set>

#include "coins/errors.h"

namespace coins {

CompositeResult Composite(const std::vector<Rating>& ratings) {
  static const std::set<std::string> kTraits = {"warm", "well_intentioned", "competent",
                                                "intelligent"};
  struct Group {
    std::map<std::string, int> items;
    int episode = 0;
  };
  std::map<RatingKey, Group> groups;
  for (const Rating& r : ratings) {
    if (!kTraits.contains(r.trait)) throw ValidationError("unknown trait '" + r.trait + "'");
    if (r.value < 1 || r.value > 5) {
      throw ValidationError("rating " + std::to_string(r.value) + " outside 1..5");
    }
    Group& g = groups[{r.participant, r.co_player, r.repetition}];
    if (!g.items.emplace(r.trait, r.value).second) {
      throw ValidationError("duplicate '" + r.trait + "' rating of " + r.co_player + " by " +
                            r.participant + " (repetition " + std::to_string(r.repetition) +
                            ")");
    }
    g.episode = r.episode;
  }
  CompositeResult out;
  for (const auto& [key, g] : groups) {
    if (g.items.size() != kTraits.size()) {
      out.excluded.push_back(key);
      continue;
    }
    out.scores.push_back(
        {key.participant, key.co_player, key.repetition, g.episode,
         (g.items.at("warm") + g.items.at("well_intentioned")) / 2.0,
         (g.items.at("competent") + g.items.at("intelligent")) / 2.0});
  }
  return out;
}

}  // namespace coins

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

#ifndef COINS_STUDY_SEQUENCE_H_
#define COINS_STUDY_SEQUENCE_H_

#include <string>
#include <vector>

#include "coins/env/rng.h"
#include "coins/study/config.h"

namespace coins {

struct EpisodePlan {
  // Co-player label per co-play episode, in play order.
  std::vector<std::string> coplayers;
  // 1-based episode numbers after which a preference prompt follows; the
  // prompt compares the co-players of that episode and the one before it.
  std::vector<int> preference_after;
  // Study 3: one more episode whose co-player depends on the partner choice.
  bool choice_slot = false;

  friend bool operator==(const EpisodePlan&, const EpisodePlan&) = default;
};

// Studies 1 and 2: every unordered pair of roster agents, pairs shuffled,
// the two members of each pair shuffled, flattened into adjacent slots.
// Study 3: a single uniformly drawn co-player plus the choice slot.
// Throws ConfigError when the roster does not fit the variant.
EpisodePlan BuildCoplayerSequence(StudyVariant variant,
                                  const std::vector<std::string>& labels, Rng& rng);

}  // namespace coins

#endif  // COINS_STUDY_SEQUENCE_H_

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

#ifndef COINS_STATS_COMPOSITE_H_
#define COINS_STATS_COMPOSITE_H_

#include <string>
#include <vector>

namespace coins {

// One Likert answer. `episode` is carried through to the composite and is
// not part of the key.
struct Rating {
  std::string participant;
  std::string co_player;
  int repetition = 0;
  std::string trait;  // warm, well_intentioned, competent or intelligent
  int value = 0;      // 1..5
  int episode = 0;
};

struct CompositeScore {
  std::string participant;
  std::string co_player;
  int repetition = 0;
  int episode = 0;
  double warmth = 0.0;      // mean of warm and well_intentioned
  double competence = 0.0;  // mean of competent and intelligent
};

struct RatingKey {
  std::string participant;
  std::string co_player;
  int repetition = 0;
  auto operator<=>(const RatingKey&) const = default;
};

struct CompositeResult {
  std::vector<CompositeScore> scores;  // ordered by key
  std::vector<RatingKey> excluded;     // groups missing at least one trait
};

// Throws ValidationError for an unknown trait, a value outside 1..5 or a
// repeated (participant, co_player, repetition, trait).
CompositeResult Composite(const std::vector<Rating>& ratings);

}  // namespace coins

#endif  // COINS_STATS_COMPOSITE_H_

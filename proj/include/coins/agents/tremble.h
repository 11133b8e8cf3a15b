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

#ifndef COINS_AGENTS_TREMBLE_H_
#define COINS_AGENTS_TREMBLE_H_

#include "coins/env/rng.h"
#include "coins/env/types.h"

namespace coins {

struct TremblingParams {
  double epsilon = 0.0;  // in [0, 1]
  friend bool operator==(const TremblingParams&, const TremblingParams&) = default;
};

// Trembling hand: with probability epsilon the chosen action is replaced by
// a uniform draw over all five actions (which may return the original).
// Consumes one draw, plus one more when the tremble fires.
inline Action Tremble(Action action, TremblingParams params, Rng& rng) {
  if (rng.Uniform() < params.epsilon) {
    return static_cast<Action>(rng.UniformInt(kNumActions));
  }
  return action;
}

}  // namespace coins

#endif  // COINS_AGENTS_TREMBLE_H_

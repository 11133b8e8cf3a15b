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

#ifndef COINS_AGENTS_SCRIPTED_H_
#define COINS_AGENTS_SCRIPTED_H_

#include <functional>
#include <vector>

#include "coins/env/observation.h"

namespace coins {

// Greedy collector: first move of a shortest path (BFS over passable cells)
// to the nearest coin of either color. Ties between targets go to the
// (row, col)-smallest coin, ties between moves to the first action in
// {up, down, left, right}. No coin reachable: no_op.
Action ScriptedSelfishPolicy(const Observation& obs);

// As above but only targets own-color coins and never enters a cell holding
// the other color's coin. If no own coin is reachable that way: no_op.
Action ScriptedProsocialPolicy(const Observation& obs);

// Breadth-first distances from `start` over cells where `passable` holds;
// unreachable cells are -1. `start` itself need not be passable.
std::vector<int> BfsDistances(const Observation& obs, Position start,
                              const std::function<bool(ObsCode)>& passable);

}  // namespace coins

#endif  // COINS_AGENTS_SCRIPTED_H_

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

#include "coins/agents/scripted.h"

#include <deque>
#include <limits>

namespace coins {
namespace {

constexpr Action kMoveOrder[] = {Action::kMoveUp, Action::kMoveDown,
                                 Action::kMoveLeft, Action::kMoveRight};

bool Inside(const Observation& obs, Position p) {
  return p.row >= 0 && p.row < obs.rows && p.col >= 0 && p.col < obs.cols;
}

Action TowardNearest(const Observation& obs,
                     const std::function<bool(ObsCode)>& passable,
                     const std::function<bool(ObsCode)>& is_target) {
  const Position self = obs.self_position();
  const std::vector<int> from_self = BfsDistances(obs, self, passable);

  int best = std::numeric_limits<int>::max();
  Position target{-1, -1};
  // Row-major scan visits targets in (row, col) order, so strict < keeps
  // the lexicographically smallest among equidistant coins.
  for (int r = 0; r < obs.rows; ++r) {
    for (int c = 0; c < obs.cols; ++c) {
      const int d = from_self[r * obs.cols + c];
      if (d > 0 && d < best && is_target(obs.at(r, c))) {
        best = d;
        target = {r, c};
      }
    }
  }
  if (target.row < 0) return Action::kNoOp;

  const std::vector<int> to_target = BfsDistances(obs, target, passable);
  for (Action a : kMoveOrder) {
    const Position next = Displace(self, a);
    if (!Inside(obs, next)) continue;
    const int d = to_target[next.row * obs.cols + next.col];
    if (d == best - 1 && (d == 0 || passable(obs.at(next.row, next.col)))) {
      return a;
    }
  }
  return Action::kNoOp;
}

}  // namespace

std::vector<int> BfsDistances(const Observation& obs, Position start,
                              const std::function<bool(ObsCode)>& passable) {
  std::vector<int> dist(obs.cells.size(), -1);
  std::deque<Position> frontier;
  dist[start.row * obs.cols + start.col] = 0;
  frontier.push_back(start);
  while (!frontier.empty()) {
    const Position p = frontier.front();
    frontier.pop_front();
    const int d = dist[p.row * obs.cols + p.col];
    for (Action a : kMoveOrder) {
      const Position q = Displace(p, a);
      if (!Inside(obs, q)) continue;
      const size_t qi = q.row * obs.cols + q.col;
      if (dist[qi] >= 0 || !passable(obs.cells[qi])) continue;
      dist[qi] = d + 1;
      frontier.push_back(q);
    }
  }
  return dist;
}

Action ScriptedSelfishPolicy(const Observation& obs) {
  return TowardNearest(
      obs,
      [](ObsCode c) {
        return c == ObsCode::kEmpty || c == ObsCode::kCoinOwn ||
               c == ObsCode::kCoinOther;
      },
      [](ObsCode c) {
        return c == ObsCode::kCoinOwn || c == ObsCode::kCoinOther;
      });
}

Action ScriptedProsocialPolicy(const Observation& obs) {
  return TowardNearest(
      obs,
      [](ObsCode c) { return c == ObsCode::kEmpty || c == ObsCode::kCoinOwn; },
      [](ObsCode c) { return c == ObsCode::kCoinOwn; });
}

}  // namespace coins

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

#include "coins/study/bonus.h"

#include <cmath>
#include <cstdio>

#include "coins/errors.h"

namespace coins {

int64_t BonusCents(int64_t points, double bonus_per_point) {
  if (!(bonus_per_point >= 0.0)) throw ConfigError("bonus_per_point must be >= 0");
  if (points <= 0) return 0;
  const int64_t rate_centicents = std::llround(bonus_per_point * 10000.0);
  const int64_t centicents = rate_centicents * points;
  return (centicents + 50) / 100;
}

std::string FormatDollars(int64_t cents) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%lld.%02lld", cents < 0 ? "-" : "",
                static_cast<long long>(std::llabs(cents) / 100),
                static_cast<long long>(std::llabs(cents) % 100));
  return buf;
}

}  // namespace coins

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

#ifndef COINS_STUDY_BONUS_H_
#define COINS_STUDY_BONUS_H_

#include <cstdint>
#include <string>

namespace coins {

// bonus_per_point * max(0, points) in cents, rounded half-up. The rate is
// resolved to a hundredth of a cent.
int64_t BonusCents(int64_t points, double bonus_per_point);

// "5.00" style rendering of a cent amount.
std::string FormatDollars(int64_t cents);

}  // namespace coins

#endif  // COINS_STUDY_BONUS_H_

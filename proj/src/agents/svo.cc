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

#include "coins/agents/svo.h"

#include <cmath>
#include <numbers>
#include <numeric>

#include "coins/errors.h"

namespace coins {

std::pair<double, double> CosSinDegrees(double degrees) {
  if (degrees == 0.0) return {1.0, 0.0};
  if (degrees == 45.0) return {std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2};
  if (degrees == 90.0) return {0.0, 1.0};
  const double rad = degrees * std::numbers::pi / 180.0;
  return {std::cos(rad), std::sin(rad)};
}

double SvoUtility(double r_self, std::span<const double> r_others,
                  double theta_degrees) {
  if (!(theta_degrees >= 0.0 && theta_degrees <= 90.0)) {
    throw ConfigError("SVO angle must lie in [0, 90] degrees");
  }
  const double mean_others =
      r_others.empty()
          ? 0.0
          : std::accumulate(r_others.begin(), r_others.end(), 0.0) /
                static_cast<double>(r_others.size());
  const auto [c, s] = CosSinDegrees(theta_degrees);
  return r_self * c + mean_others * s;
}

}  // namespace coins

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

#ifndef COINS_AGENTS_SVO_H_
#define COINS_AGENTS_SVO_H_

#include <span>
#include <utility>

namespace coins {

struct SvoParams {
  double theta_degrees = 0.0;  // accepted range [0, 90]
  friend bool operator==(const SvoParams&, const SvoParams&) = default;
};

inline constexpr double kIndividualisticTheta = 0.0;
inline constexpr double kProsocialTheta = 45.0;

// (cos, sin) of an angle in degrees; exact at 0, 45 and 90.
std::pair<double, double> CosSinDegrees(double degrees);

// Social value orientation utility by vector projection:
//   U = r_self * cos(theta) + mean(r_others) * sin(theta).
// With no other players the mean is taken as 0, so a lone theta = 0 agent
// sees its own reward unchanged. Throws ConfigError when theta is outside
// [0, 90] degrees.
double SvoUtility(double r_self, std::span<const double> r_others,
                  double theta_degrees);

}  // namespace coins

#endif  // COINS_AGENTS_SVO_H_

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

#ifndef COINS_ENV_RNG_H_
#define COINS_ENV_RNG_H_

#include <cstdint>
#include <random>

namespace coins {

// Mixes (seed, stream) into an independent 64-bit seed using SplitMix64.
// Used to give every episode and every purpose (spawning, colors,
// priority, policy sampling) its own stream.
uint64_t DeriveSeed(uint64_t seed, uint64_t stream);

// Portable deterministic generator. The engine is std::mt19937_64, whose
// output sequence is fixed by the C++ standard; the distributions below are
// implemented here (the std:: distributions are implementation-defined) so
// that logs replay bit-identically across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : engine_(seed) {}

  uint64_t NextU64() {
    ++draws_;
    return engine_();
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double Uniform() { return (NextU64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). Rejection sampling; n must be > 0.
  int UniformInt(int n);

  // Always consumes exactly one draw.
  bool Bernoulli(double p) { return Uniform() < p; }

  uint64_t draws() const { return draws_; }

  bool operator==(const Rng& other) const {
    return engine_ == other.engine_ && draws_ == other.draws_;
  }

 private:
  std::mt19937_64 engine_;
  uint64_t draws_ = 0;
};

}  // namespace coins

#endif  // COINS_ENV_RNG_H_

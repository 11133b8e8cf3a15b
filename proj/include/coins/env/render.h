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

#ifndef COINS_ENV_RENDER_H_
#define COINS_ENV_RENDER_H_

#include <array>
#include <cstdint>
#include <vector>

#include "coins/env/observation.h"

namespace coins {

inline constexpr int kSpriteSize = 8;

struct Rgb {
  uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Colorblind-friendly (Okabe-Ito derived) palette. Documented in
// docs/palette.md; the web client consumes the same constants.
struct Palette {
  Rgb out_of_bounds{0, 0, 0};
  Rgb wall{128, 128, 128};
  Rgb floor{32, 32, 40};
  std::array<Rgb, kNumColors> colors = {{
      {213, 94, 0},     // red (vermillion)
      {0, 114, 178},    // blue
      {240, 228, 66},   // yellow
      {0, 158, 115},    // green (bluish green)
      {204, 121, 167},  // purple (reddish purple)
  }};

  static Palette Default() { return {}; }
};

// 8x8 sprite masks; '#' pixels take the entity color, '.' pixels the floor.
// The self and co-player sprites share a shape; only the color differs.
extern const std::array<const char*, kSpriteSize> kPlayerSprite;
extern const std::array<const char*, kSpriteSize> kCoinSprite;

struct PixelBuffer {
  int height = 0;
  int width = 0;
  std::vector<uint8_t> rgb;  // height * width * 3, row-major

  Rgb pixel(int y, int x) const {
    const size_t i = (static_cast<size_t>(y) * width + x) * 3;
    return {rgb[i], rgb[i + 1], rgb[i + 2]};
  }
  friend bool operator==(const PixelBuffer&, const PixelBuffer&) = default;
};

// Renders an r x c symbolic observation into an (8r) x (8c) x 3 buffer.
PixelBuffer RenderSprites(const Observation& obs,
                          const Palette& palette = Palette::Default());

}  // namespace coins

#endif  // COINS_ENV_RENDER_H_

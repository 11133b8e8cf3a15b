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

#include "coins/env/render.h"

namespace coins {

const std::array<const char*, kSpriteSize> kPlayerSprite = {
    "..####..",
    ".######.",
    "##.##.##",
    "########",
    "########",
    "#.####.#",
    "#.#..#.#",
    "..#..#..",
};

const std::array<const char*, kSpriteSize> kCoinSprite = {
    "........",
    "...##...",
    "..####..",
    ".######.",
    ".######.",
    "..####..",
    "...##...",
    "........",
};

namespace {

void Fill(PixelBuffer& buf, int cell_r, int cell_c, Rgb color) {
  for (int y = 0; y < kSpriteSize; ++y) {
    for (int x = 0; x < kSpriteSize; ++x) {
      const size_t i = (static_cast<size_t>(cell_r * kSpriteSize + y) *
                            buf.width + cell_c * kSpriteSize + x) * 3;
      buf.rgb[i] = color.r;
      buf.rgb[i + 1] = color.g;
      buf.rgb[i + 2] = color.b;
    }
  }
}

void Blit(PixelBuffer& buf, int cell_r, int cell_c,
          const std::array<const char*, kSpriteSize>& mask, Rgb ink,
          Rgb background) {
  for (int y = 0; y < kSpriteSize; ++y) {
    for (int x = 0; x < kSpriteSize; ++x) {
      const Rgb color = mask[y][x] == '#' ? ink : background;
      const size_t i = (static_cast<size_t>(cell_r * kSpriteSize + y) *
                            buf.width + cell_c * kSpriteSize + x) * 3;
      buf.rgb[i] = color.r;
      buf.rgb[i + 1] = color.g;
      buf.rgb[i + 2] = color.b;
    }
  }
}

}  // namespace

PixelBuffer RenderSprites(const Observation& obs, const Palette& palette) {
  PixelBuffer buf;
  buf.height = obs.rows * kSpriteSize;
  buf.width = obs.cols * kSpriteSize;
  buf.rgb.assign(static_cast<size_t>(buf.height) * buf.width * 3, 0);
  const Rgb self = palette.colors[static_cast<int>(obs.self_color)];
  const Rgb other = palette.colors[static_cast<int>(obs.other_color)];
  for (int r = 0; r < obs.rows; ++r) {
    for (int c = 0; c < obs.cols; ++c) {
      switch (obs.at(r, c)) {
        case ObsCode::kOutOfBounds: Fill(buf, r, c, palette.out_of_bounds); break;
        case ObsCode::kWall: Fill(buf, r, c, palette.wall); break;
        case ObsCode::kEmpty: Fill(buf, r, c, palette.floor); break;
        case ObsCode::kCoinOwn: Blit(buf, r, c, kCoinSprite, self, palette.floor); break;
        case ObsCode::kCoinOther: Blit(buf, r, c, kCoinSprite, other, palette.floor); break;
        case ObsCode::kSelf: Blit(buf, r, c, kPlayerSprite, self, palette.floor); break;
        case ObsCode::kCoPlayer: Blit(buf, r, c, kPlayerSprite, other, palette.floor); break;
      }
    }
  }
  return buf;
}

}  // namespace coins

// Copyright 2026 The diftsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace diftsim {

/// Rectangle [i_row, e_row) x [i_col, e_col). An empty rectangle
/// (i_row == e_row or i_col == e_col) is legal and selects no pixels.
struct PatchParams {
  uint32_t i_row = 0;
  uint32_t e_row = 0;
  uint32_t i_col = 0;
  uint32_t e_col = 0;

  bool operator==(const PatchParams&) const = default;

  bool valid_for(uint32_t rows, uint32_t cols) const noexcept {
    return i_row <= e_row && e_row <= rows && i_col <= e_col && e_col <= cols;
  }
  bool contains(uint32_t r, uint32_t c) const noexcept {
    return r >= i_row && r < e_row && c >= i_col && c < e_col;
  }
  bool empty() const noexcept { return i_row == e_row || i_col == e_col; }
  uint64_t area() const noexcept {
    return uint64_t{e_row - i_row} * uint64_t{e_col - i_col};
  }
};

/// Row-major 8-bit grayscale image.
struct Image {
  uint32_t rows = 0;
  uint32_t cols = 0;
  std::vector<uint8_t> pixels;

  bool operator==(const Image&) const = default;

  static Image filled(uint32_t rows, uint32_t cols, uint8_t value) {
    Image img;
    img.rows = rows;
    img.cols = cols;
    img.pixels.assign(size_t{rows} * cols, value);
    return img;
  }

  uint8_t at(uint32_t r, uint32_t c) const { return pixels[size_t{r} * cols + c]; }
  uint8_t& at(uint32_t r, uint32_t c) { return pixels[size_t{r} * cols + c]; }
  size_t size() const noexcept { return pixels.size(); }
};

/// Obfuscation filter: every pixel inside the patch becomes the floor of the
/// mean of its 3x3 neighborhood clamped to the image bounds, reading from the
/// original input only; pixels outside the patch are copied unchanged.
inline Image blur_kernel(const Image& in, const PatchParams& p) {
  if (!p.valid_for(in.rows, in.cols))
    throw std::invalid_argument("patch does not fit the image geometry");
  Image out = in;
  for (uint32_t r = p.i_row; r < p.e_row; ++r) {
    for (uint32_t c = p.i_col; c < p.e_col; ++c) {
      uint32_t sum = 0;
      uint32_t count = 0;
      for (int dr = -1; dr <= 1; ++dr) {
        const int64_t nr = int64_t{r} + dr;
        if (nr < 0 || nr >= in.rows) continue;
        for (int dc = -1; dc <= 1; ++dc) {
          const int64_t nc = int64_t{c} + dc;
          if (nc < 0 || nc >= in.cols) continue;
          sum += in.at(static_cast<uint32_t>(nr), static_cast<uint32_t>(nc));
          count += 1;
        }
      }
      out.at(r, c) = static_cast<uint8_t>(sum / count);
    }
  }
  return out;
}

}  // namespace diftsim

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

namespace diftsim {

/// Sensitivity tag of one 32-bit word: bit i set means byte lane i holds
/// sensitive data. Valid values are 0b0000 through 0b1111.
using Tag = uint8_t;

inline constexpr Tag kTagClean = 0x0;
inline constexpr Tag kTagAllLanes = 0xF;

constexpr bool tag_is_sensitive(Tag t) noexcept { return (t & kTagAllLanes) != 0; }

/// Mask covering the lowest `width` byte lanes (width 1, 2 or 4).
constexpr Tag lane_mask(unsigned width) noexcept {
  return static_cast<Tag>((1u << width) - 1u);
}

/// A data word and its tag. The tag travels with the data through every
/// copy; no memory operation hands out one without the other.
struct TaggedWord {
  uint32_t data = 0;
  Tag tag = kTagClean;

  bool operator==(const TaggedWord&) const = default;
};

}  // namespace diftsim

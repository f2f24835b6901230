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

#include "diftsim/memory_map.hpp"
#include "diftsim/tag.hpp"

namespace diftsim {

/// Word-wide window through which a bus master other than the CPU reaches
/// system memory. Implementations decide what happens to the tags.
class BusAdapter {
 public:
  virtual ~BusAdapter() = default;

  virtual uint32_t read_word(uint32_t addr) = 0;
  virtual void write_word(uint32_t addr, uint32_t data) = 0;
};

/// Direct bus connection of a DIFT-unaware master: read tags are discarded
/// and every write carries tag 0b0000. This is what makes an unprotected
/// accelerator a tag-laundering path.
class BareBusAdapter final : public BusAdapter {
 public:
  explicit BareBusAdapter(MemoryMap& mem) : mem_(mem) {}

  uint32_t read_word(uint32_t addr) override { return mem_.read(addr, 4).value; }
  void write_word(uint32_t addr, uint32_t data) override {
    mem_.write(addr, 4, data, kTagClean);
  }

 private:
  MemoryMap& mem_;
};

}  // namespace diftsim

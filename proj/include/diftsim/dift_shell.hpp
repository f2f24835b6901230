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
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "diftsim/bus_adapter.hpp"
#include "diftsim/image.hpp"
#include "diftsim/memory_map.hpp"
#include "diftsim/tag.hpp"

namespace diftsim {

/// Geometry the shell mirrors from the accelerator registers when a run
/// starts: where the buffers are and which pixels the engine will blur.
struct ShellConfig {
  uint32_t src_base = 0;
  uint32_t dst_base = 0;
  uint32_t rows = 0;
  uint32_t cols = 0;
  PatchParams patch;

  uint32_t pixel_count() const noexcept { return rows * cols; }
};

struct ShellViolationInfo {
  uint32_t addr = 0;  // first offending destination word
  uint32_t row = 0;   // pixel coordinate of the first offending byte
  uint32_t col = 0;
  Tag tag = kTagClean;  // computed output tag bits of that word, nonzero
};

/// Policy violation detected by the shell at write time. The offending word
/// is never written; the accelerator run is aborted.
class ShellViolation : public std::runtime_error {
 public:
  explicit ShellViolation(const ShellViolationInfo& info)
      : std::runtime_error(format(info)), info_(info) {}

  const ShellViolationInfo& info() const noexcept { return info_; }

 private:
  static std::string format(const ShellViolationInfo& i) {
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "sensitive pixel (%u,%u) about to leave the patch: write to 0x%08x blocked",
                  i.row, i.col, i.addr);
    return buf;
  }

  ShellViolationInfo info_;
};

/// Accelerator access outside its configured buffers; aborts the run.
class ShellFault : public std::runtime_error {
 public:
  explicit ShellFault(uint32_t addr)
      : std::runtime_error(format(addr)), addr_(addr) {}

  uint32_t addr() const noexcept { return addr_; }

 private:
  static std::string format(uint32_t addr) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "shell fault: access to 0x%08x outside the run window", addr);
    return buf;
  }

  uint32_t addr_;
};

/// Output-tag rule: a pixel the accelerator blurs (inside the patch) leaves
/// declassified; any other pixel keeps its input tag bit, position for
/// position.
inline unsigned out_tag(uint32_t row, uint32_t col, unsigned in_tag_bit,
                        const PatchParams& patch) {
  return patch.contains(row, col) ? 0u : (in_tag_bit & 1u);
}

/// Per-run tag bookkeeping: one entry per source byte, filled in as the
/// accelerator reads. Bytes never read stay unknown.
struct ShellState {
  enum : int8_t { unknown = -1, clean = 0, sensitive = 1 };
  std::vector<int8_t> input_tag_map;
};

/// The shell circuit around a DIFT-unaware accelerator. It intercepts the
/// accelerator's bus traffic, records input tags on reads, recomputes output
/// tags on writes and blocks any write that would emit a sensitive byte.
/// The accelerator itself only ever sees plain data.
class DiftShell final : public BusAdapter {
 public:
  DiftShell(MemoryMap& mem, const ShellConfig& cfg) : mem_(mem), cfg_(cfg) {
    state_.input_tag_map.assign(cfg.pixel_count(), ShellState::unknown);
  }

  uint32_t read_word(uint32_t addr) override {
    if (addr % 4 != 0 || addr < cfg_.src_base ||
        uint64_t{addr} + 4 > uint64_t{cfg_.src_base} + cfg_.pixel_count())
      throw ShellFault(addr);
    const ReadResult rr = mem_.read(addr, 4);
    const uint32_t idx = addr - cfg_.src_base;
    for (unsigned lane = 0; lane < 4; ++lane) {
      state_.input_tag_map[idx + lane] =
          ((rr.tag_bits >> lane) & 1) ? ShellState::sensitive : ShellState::clean;
    }
    return rr.value;  // tags stay inside the shell
  }

  void write_word(uint32_t addr, uint32_t data) override {
    if (addr % 4 != 0 || addr < cfg_.dst_base ||
        uint64_t{addr} + 4 > uint64_t{cfg_.dst_base} + cfg_.pixel_count())
      throw ShellFault(addr);
    const uint32_t idx = addr - cfg_.dst_base;
    Tag tag = kTagClean;
    uint32_t bad_row = 0;
    uint32_t bad_col = 0;
    for (unsigned lane = 0; lane < 4; ++lane) {
      const uint32_t r = (idx + lane) / cfg_.cols;
      const uint32_t c = (idx + lane) % cfg_.cols;
      // A destination byte whose source was never read has an unknown input
      // tag; fail closed and treat it as sensitive.
      const int8_t recorded = state_.input_tag_map[idx + lane];
      const unsigned in_bit = (recorded == ShellState::clean) ? 0u : 1u;
      if (out_tag(r, c, in_bit, cfg_.patch) != 0) {
        if (!tag_is_sensitive(tag)) {
          bad_row = r;
          bad_col = c;
        }
        tag = static_cast<Tag>(tag | (1u << lane));
      }
    }
    if (tag_is_sensitive(tag))
      throw ShellViolation({addr, bad_row, bad_col, tag});
    mem_.write(addr, 4, data, kTagClean);
  }

  const ShellState& state() const noexcept { return state_; }
  const ShellConfig& config() const noexcept { return cfg_; }

 private:
  MemoryMap& mem_;
  ShellConfig cfg_;
  ShellState state_;
};

}  // namespace diftsim

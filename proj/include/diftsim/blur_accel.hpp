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

#include <array>
#include <cstdint>
#include <optional>

#include "diftsim/bus_adapter.hpp"
#include "diftsim/dift_shell.hpp"
#include "diftsim/image.hpp"
#include "diftsim/memory_map.hpp"
#include "diftsim/tag.hpp"

namespace diftsim {

// Register file of the obfuscation engine, word offsets from the base.
namespace accel_reg {
inline constexpr uint32_t kCmd = 0x00;      // write 1: start
inline constexpr uint32_t kStatus = 0x04;   // read-only
inline constexpr uint32_t kSrcAddr = 0x08;
inline constexpr uint32_t kDstAddr = 0x0C;
inline constexpr uint32_t kRows = 0x10;
inline constexpr uint32_t kCols = 0x14;
inline constexpr uint32_t kIRow = 0x18;
inline constexpr uint32_t kERow = 0x1C;
inline constexpr uint32_t kICol = 0x20;
inline constexpr uint32_t kECol = 0x24;
inline constexpr uint32_t kEnd = 0x28;
}  // namespace accel_reg

enum class AccelStatus : uint32_t {
  idle = 0,
  busy = 1,
  done = 2,
  dift_error = 3,
};

enum class AccelMode { bare, shelled };

enum class AccelOutcome { none, done, dift_error, fault };

/// Memory-mapped face-obfuscation accelerator. Configuration registers latch
/// buffer addresses, image geometry and the patch; writing CMD=1 runs the
/// blur to completion (DMA in, filter, DMA out) before control returns to
/// the CPU, so software only ever observes STATUS done or dift_error.
///
/// In bare mode the engine is wired straight to the bus and is oblivious to
/// tags. In shelled mode every transfer goes through a DiftShell built from
/// the latched registers at start time.
class BlurAccelerator final : public MmioDevice {
 public:
  BlurAccelerator(MemoryMap& mem, AccelMode mode) : mem_(mem), mode_(mode) {}

  ReadResult read(uint32_t offset, unsigned width) override {
    check_access(offset, width);
    if (offset == accel_reg::kCmd) return {0, kTagClean};  // CMD reads as 0
    if (offset == accel_reg::kStatus) return {static_cast<uint32_t>(status_), kTagClean};
    return {cfg_word(offset), kTagClean};
  }

  void write(uint32_t offset, unsigned width, uint32_t value, Tag) override {
    check_access(offset, width);
    if (offset == accel_reg::kStatus) return;  // read-only from the bus
    if (offset == accel_reg::kCmd) {
      if (value == 1 && (status_ == AccelStatus::idle || status_ == AccelStatus::done))
        start();
      return;
    }
    cfg_word(offset) = value;
  }

  AccelStatus status() const noexcept { return status_; }
  AccelOutcome last_outcome() const noexcept { return outcome_; }
  const std::optional<ShellViolationInfo>& violation() const noexcept { return violation_; }
  AccelMode mode() const noexcept { return mode_; }

  ShellConfig shell_config() const {
    ShellConfig cfg;
    cfg.src_base = cfg_[0];
    cfg.dst_base = cfg_[1];
    cfg.rows = cfg_[2];
    cfg.cols = cfg_[3];
    cfg.patch = PatchParams{cfg_[4], cfg_[5], cfg_[6], cfg_[7]};
    return cfg;
  }

 private:
  static void check_access(uint32_t offset, unsigned width) {
    // Registers respond to aligned word accesses only.
    if (width != 4 || offset % 4 != 0 || offset >= accel_reg::kEnd)
      throw DeviceFault{offset};
  }

  uint32_t& cfg_word(uint32_t offset) { return cfg_[(offset - accel_reg::kSrcAddr) / 4]; }
  uint32_t cfg_word(uint32_t offset) const { return cfg_[(offset - accel_reg::kSrcAddr) / 4]; }

  bool config_valid() const {
    const ShellConfig c = shell_config();
    if (c.src_base % 4 != 0 || c.dst_base % 4 != 0) return false;
    if (c.cols % 4 != 0) return false;
    if (uint64_t{c.rows} * c.cols > 0x7FFFFFFF) return false;
    return c.patch.valid_for(c.rows, c.cols);
  }

  void start() {
    violation_.reset();
    if (!config_valid()) {
      status_ = AccelStatus::dift_error;  // STATUS 3 doubles as the config-error code
      outcome_ = AccelOutcome::fault;
      return;
    }
    status_ = AccelStatus::busy;
    try {
      execute();
      status_ = AccelStatus::done;
      outcome_ = AccelOutcome::done;
    } catch (const ShellViolation& v) {
      violation_ = v.info();
      status_ = AccelStatus::dift_error;
      outcome_ = AccelOutcome::dift_error;
    } catch (const ShellFault&) {
      status_ = AccelStatus::dift_error;
      outcome_ = AccelOutcome::fault;
    } catch (const MemFault&) {
      status_ = AccelStatus::dift_error;
      outcome_ = AccelOutcome::fault;
    }
  }

  // DMA the input in ascending word order, run the filter, DMA the result
  // out in ascending word order. The data path is identical in both modes;
  // only the adapter differs.
  void execute() {
    const ShellConfig c = shell_config();
    BareBusAdapter bare(mem_);
    DiftShell shelled(mem_, c);
    BusAdapter& bus = (mode_ == AccelMode::shelled)
                          ? static_cast<BusAdapter&>(shelled)
                          : static_cast<BusAdapter&>(bare);

    Image in;
    in.rows = c.rows;
    in.cols = c.cols;
    in.pixels.resize(size_t{c.rows} * c.cols);
    for (uint32_t off = 0; off < in.pixels.size(); off += 4) {
      const uint32_t w = bus.read_word(c.src_base + off);
      in.pixels[off + 0] = static_cast<uint8_t>(w);
      in.pixels[off + 1] = static_cast<uint8_t>(w >> 8);
      in.pixels[off + 2] = static_cast<uint8_t>(w >> 16);
      in.pixels[off + 3] = static_cast<uint8_t>(w >> 24);
    }

    const Image out = blur_kernel(in, c.patch);

    for (uint32_t off = 0; off < out.pixels.size(); off += 4) {
      const uint32_t w = uint32_t{out.pixels[off + 0]} |
                         (uint32_t{out.pixels[off + 1]} << 8) |
                         (uint32_t{out.pixels[off + 2]} << 16) |
                         (uint32_t{out.pixels[off + 3]} << 24);
      bus.write_word(c.dst_base + off, w);
    }
  }

  MemoryMap& mem_;
  AccelMode mode_;
  AccelStatus status_ = AccelStatus::idle;
  AccelOutcome outcome_ = AccelOutcome::none;
  std::optional<ShellViolationInfo> violation_;
  std::array<uint32_t, 8> cfg_{};  // src, dst, rows, cols, i_row, e_row, i_col, e_col
};

}  // namespace diftsim

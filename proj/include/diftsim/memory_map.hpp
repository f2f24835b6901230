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

#include <cassert>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "diftsim/tag.hpp"

namespace diftsim {

enum class MemFaultKind {
  misaligned,
  unmapped,
  read_only,
  non_executable,
  device,
};

inline const char* to_string(MemFaultKind k) {
  switch (k) {
    case MemFaultKind::misaligned: return "misaligned";
    case MemFaultKind::unmapped: return "unmapped";
    case MemFaultKind::read_only: return "read-only";
    case MemFaultKind::non_executable: return "non-executable";
    case MemFaultKind::device: return "device";
  }
  return "?";
}

/// Bus access fault. Thrown by MemoryMap accessors; the CPU model turns it
/// into a step event instead of letting it unwind the simulation.
class MemFault : public std::runtime_error {
 public:
  MemFault(MemFaultKind kind, uint32_t addr)
      : std::runtime_error(format(kind, addr)), kind_(kind), addr_(addr) {}

  MemFaultKind kind() const noexcept { return kind_; }
  uint32_t addr() const noexcept { return addr_; }

 private:
  static std::string format(MemFaultKind kind, uint32_t addr) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s access fault at 0x%08x", to_string(kind), addr);
    return buf;
  }

  MemFaultKind kind_;
  uint32_t addr_;
};

enum class MapErrorKind {
  overlapping_region,
  bad_alignment,
  second_executable,
  range_violation,
  no_ram,
};

/// Construction or loader error on a MemoryMap (overlapping regions,
/// misaligned region bounds, blob loads outside one RAM region, ...).
class MapError : public std::runtime_error {
 public:
  MapError(MapErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  MapErrorKind kind() const noexcept { return kind_; }

 private:
  MapErrorKind kind_;
};

enum class RegionKind { ram, mmio };

struct Region {
  uint32_t base = 0;
  uint32_t size = 0;  // bytes
  RegionKind kind = RegionKind::ram;
  bool executable = false;
};

struct ReadResult {
  uint32_t value = 0;
  Tag tag_bits = kTagClean;  // tag bits of the accessed lanes only, lane 0 first

  bool operator==(const ReadResult&) const = default;
};

/// Raised by a device handler for an access it does not implement. The map
/// rebases the offset and resurfaces it as a MemFault of kind `device`.
struct DeviceFault {
  uint32_t offset = 0;
};

/// A bus slave reachable through the memory map. Offsets are relative to the
/// region base. Devices that are not tag-aware return tag 0 on reads and
/// ignore the tag bits on writes.
class MmioDevice {
 public:
  virtual ~MmioDevice() = default;

  virtual ReadResult read(uint32_t offset, unsigned width) = 0;
  virtual void write(uint32_t offset, unsigned width, uint32_t value, Tag tag_bits) = 0;
};

/// System memory map with coupled tags: every RAM word is stored next to its
/// 4-bit tag, one sensitivity bit per byte lane. Accesses are dispatched to
/// RAM backing stores or MMIO device handlers; every address is either inside
/// exactly one region or faults.
class MemoryMap {
 public:
  /// Adds a RAM region backed by a zero-initialized word array plus a tag
  /// array with one tag bit per data byte.
  void add_ram(const Region& region) {
    Region r = region;
    r.kind = RegionKind::ram;
    check_region(r);
    Entry e;
    e.region = r;
    e.words.assign(r.size / 4, 0);
    e.tags.assign(r.size / 4, kTagClean);
    entries_.push_back(std::move(e));
    if (r.executable) have_executable_ = true;
  }

  /// Routes accesses inside `region` to `device`.
  void map_device(const Region& region, std::shared_ptr<MmioDevice> device) {
    assert(device);
    Region r = region;
    r.kind = RegionKind::mmio;
    r.executable = false;  // only the instruction memory executes
    check_region(r);
    Entry e;
    e.region = r;
    e.device = std::move(device);
    entries_.push_back(std::move(e));
  }

  /// Reads `width` bytes (1, 2 or 4, naturally aligned). Returns the stored
  /// bytes and exactly the tag bits of the accessed byte lanes.
  ReadResult read(uint32_t addr, unsigned width) {
    Entry& e = locate(addr, width);
    if (e.region.kind == RegionKind::mmio) {
      try {
        return e.device->read(addr - e.region.base, width);
      } catch (const DeviceFault& f) {
        throw MemFault(MemFaultKind::device, e.region.base + f.offset);
      }
    }
    const uint32_t off = addr - e.region.base;
    const unsigned lane = off % 4;
    const uint32_t word = e.words[off / 4];
    ReadResult out;
    out.value = (width == 4) ? word : (word >> (8 * lane)) & ((1u << (8 * width)) - 1u);
    out.tag_bits = static_cast<Tag>((e.tags[off / 4] >> lane) & lane_mask(width));
    return out;
  }

  /// Writes `width` bytes and their per-lane tag bits atomically. Lanes of
  /// the word outside the access keep their previous data and tags.
  void write(uint32_t addr, unsigned width, uint32_t value, Tag tag_bits) {
    Entry& e = locate(addr, width);
    if (e.region.executable)
      throw MemFault(MemFaultKind::read_only, addr);
    if (e.region.kind == RegionKind::mmio) {
      try {
        e.device->write(addr - e.region.base, width, value, tag_bits);
      } catch (const DeviceFault& f) {
        throw MemFault(MemFaultKind::device, e.region.base + f.offset);
      }
      return;
    }
    const uint32_t off = addr - e.region.base;
    const unsigned lane = off % 4;
    uint32_t& word = e.words[off / 4];
    Tag& tag = e.tags[off / 4];
    if (width == 4) {
      word = value;
      tag = tag_bits & kTagAllLanes;
    } else {
      const uint32_t data_mask = ((1u << (8 * width)) - 1u) << (8 * lane);
      word = (word & ~data_mask) | ((value << (8 * lane)) & data_mask);
      const Tag tmask = static_cast<Tag>(lane_mask(width) << lane);
      tag = static_cast<Tag>((tag & ~tmask) | ((tag_bits << lane) & tmask));
    }
  }

  /// Instruction fetch: a word read that additionally requires the address to
  /// lie in the executable region.
  uint32_t fetch(uint32_t addr) const {
    if (addr % 4 != 0)
      throw MemFault(MemFaultKind::misaligned, addr);
    const Entry* e = find(addr, 4);
    if (e == nullptr)
      throw MemFault(MemFaultKind::unmapped, addr);
    if (!e->region.executable)
      throw MemFault(MemFaultKind::non_executable, addr);
    return e->words[(addr - e->region.base) / 4];
  }

  /// Trusted-loader bulk initialization of data and tags. `tag_bits`, when
  /// given, carries one 0/1 entry per byte. Loads may target the executable
  /// region; bus writes may not.
  void load_blob(uint32_t addr, std::span<const uint8_t> bytes,
                 std::span<const uint8_t> tag_bits = {}) {
    if (!tag_bits.empty() && tag_bits.size() != bytes.size())
      throw MapError(MapErrorKind::range_violation, "tag stream length mismatch");
    Entry* e = find_ram(addr, bytes.size());
    if (e == nullptr)
      throw MapError(MapErrorKind::range_violation, "blob does not fit one RAM region");
    for (size_t i = 0; i < bytes.size(); ++i) {
      const uint32_t off = addr - e->region.base + static_cast<uint32_t>(i);
      const unsigned lane = off % 4;
      uint32_t& word = e->words[off / 4];
      word = (word & ~(0xFFu << (8 * lane))) | (uint32_t{bytes[i]} << (8 * lane));
      Tag& tag = e->tags[off / 4];
      const uint8_t bit = tag_bits.empty() ? 0 : (tag_bits[i] ? 1 : 0);
      tag = static_cast<Tag>((tag & ~(1u << lane)) | (bit << lane));
    }
  }

  /// Tag storage bits divided by data storage bits over all RAM regions.
  /// The coupled scheme pins this at exactly 1/8.
  double tag_overhead_ratio() const {
    uint64_t data_bits = 0;
    uint64_t tag_bits = 0;
    for (const Entry& e : entries_) {
      if (e.region.kind != RegionKind::ram) continue;
      data_bits += uint64_t{e.region.size} * 8;
      tag_bits += uint64_t{e.region.size};  // one tag bit per data byte
    }
    if (data_bits == 0)
      throw MapError(MapErrorKind::no_ram, "map has no RAM region");
    return static_cast<double>(tag_bits) / static_cast<double>(data_bits);
  }

  /// Byte-for-byte dump of all RAM contents followed by the packed tag
  /// arrays, in region order. Used by differential tests.
  std::vector<uint8_t> snapshot_ram() const {
    std::vector<uint8_t> out;
    for (const Entry& e : entries_) {
      if (e.region.kind != RegionKind::ram) continue;
      for (uint32_t w : e.words) {
        out.push_back(static_cast<uint8_t>(w));
        out.push_back(static_cast<uint8_t>(w >> 8));
        out.push_back(static_cast<uint8_t>(w >> 16));
        out.push_back(static_cast<uint8_t>(w >> 24));
      }
      out.insert(out.end(), e.tags.begin(), e.tags.end());
    }
    return out;
  }

  const std::vector<Region> regions() const {
    std::vector<Region> out;
    out.reserve(entries_.size());
    for (const Entry& e : entries_) out.push_back(e.region);
    return out;
  }

 private:
  struct Entry {
    Region region;
    std::vector<uint32_t> words;  // RAM only
    std::vector<Tag> tags;        // RAM only, 4 bits used per entry
    std::shared_ptr<MmioDevice> device;  // MMIO only
  };

  void check_region(const Region& r) const {
    if (r.base % 4 != 0 || r.size % 4 != 0 || r.size == 0)
      throw MapError(MapErrorKind::bad_alignment, "region base and size must be 4-byte aligned and nonzero");
    if (r.executable) {
      if (have_executable_)
        throw MapError(MapErrorKind::second_executable, "only one region may be executable");
      if (r.kind != RegionKind::ram)
        throw MapError(MapErrorKind::bad_alignment, "executable region must be RAM");
    }
    const uint64_t lo = r.base;
    const uint64_t hi = lo + r.size;
    for (const Entry& e : entries_) {
      const uint64_t elo = e.region.base;
      const uint64_t ehi = elo + e.region.size;
      if (lo < ehi && elo < hi)
        throw MapError(MapErrorKind::overlapping_region, "region overlaps an existing one");
    }
  }

  // Entry containing [addr, addr+len), or null. 64-bit math: no wraparound.
  const Entry* find(uint32_t addr, size_t len) const {
    const uint64_t lo = addr;
    const uint64_t hi = lo + len;
    for (const Entry& e : entries_) {
      const uint64_t elo = e.region.base;
      const uint64_t ehi = elo + e.region.size;
      if (lo >= elo && hi <= ehi) return &e;
    }
    return nullptr;
  }
  Entry* find(uint32_t addr, size_t len) {
    return const_cast<Entry*>(std::as_const(*this).find(addr, len));
  }

  Entry* find_ram(uint32_t addr, size_t len) {
    Entry* e = find(addr, len);
    return (e != nullptr && e->region.kind == RegionKind::ram) ? e : nullptr;
  }

  Entry& locate(uint32_t addr, unsigned width) {
    assert(width == 1 || width == 2 || width == 4);
    if (addr % width != 0)
      throw MemFault(MemFaultKind::misaligned, addr);
    Entry* e = find(addr, width);
    if (e == nullptr)
      throw MemFault(MemFaultKind::unmapped, addr);
    return *e;
  }

  std::vector<Entry> entries_;
  bool have_executable_ = false;
};

}  // namespace diftsim

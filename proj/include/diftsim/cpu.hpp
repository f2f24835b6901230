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
#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

#include "diftsim/instruction.hpp"
#include "diftsim/memory_map.hpp"
#include "diftsim/tag.hpp"

namespace diftsim {

struct RegEntry {
  uint32_t value = 0;
  Tag tag = kTagClean;

  bool operator==(const RegEntry&) const = default;
};

/// Architectural state of the tag-tracking core. regs[0] is pinned to
/// (0, clean); pc is 4-byte aligned whenever an instruction retires.
struct CpuState {
  uint32_t pc = 0;
  std::array<RegEntry, 32> regs{};
  uint64_t instret = 0;
  bool halted = false;
};

struct AddrRange {
  uint32_t base = 0;
  uint32_t size = 0;

  bool intersects(uint32_t addr, unsigned width) const noexcept {
    const uint64_t lo = addr;
    const uint64_t hi = lo + width;
    const uint64_t rlo = base;
    const uint64_t rhi = rlo + size;
    return lo < rhi && rlo < hi;
  }
};

enum class PropagationMode {
  conservative_word,  // any tainted operand bit taints the whole result word
  byte_lane,          // lane-wise OR of the operand tags
};

/// The DIFT policy: where tagged data must not go, how ALU results inherit
/// taint, and whether the declassification instruction is honored.
/// Loads and stores always track taint per byte lane.
struct PolicyConfig {
  std::vector<AddrRange> sink_ranges;
  PropagationMode propagation = PropagationMode::conservative_word;
  bool untag_enabled = true;

  bool store_hits_sink(uint32_t addr, unsigned width) const noexcept {
    for (const AddrRange& r : sink_ranges)
      if (r.intersects(addr, width)) return true;
    return false;
  }
};

enum class OpClass { alu, load, store, jump };

/// Pure tag-transfer function applied at retirement.
///  - alu: conservative-word widens any set bit to 0b1111; byte-lane ORs lanes
///  - load: LW copies the word tag verbatim; sub-word loads widen to 0b1111
///    when any accessed lane is tagged (sign/zero extension spreads the byte)
///  - store: SW writes the register tag verbatim; sub-word stores mark every
///    written lane iff the register tag is nonzero
///  - jump/branch: no tag effect
inline Tag propagate_tag(OpClass cls, PropagationMode mode,
                         std::span<const Tag> operand_tags, unsigned width = 4) {
  assert(!operand_tags.empty());
  switch (cls) {
    case OpClass::alu: {
      Tag merged = kTagClean;
      for (Tag t : operand_tags) merged = static_cast<Tag>(merged | t);
      if (mode == PropagationMode::byte_lane) return static_cast<Tag>(merged & kTagAllLanes);
      return tag_is_sensitive(merged) ? kTagAllLanes : kTagClean;
    }
    case OpClass::load: {
      const Tag t = operand_tags[0];
      if (width == 4) return static_cast<Tag>(t & kTagAllLanes);
      return tag_is_sensitive(t) ? kTagAllLanes : kTagClean;
    }
    case OpClass::store: {
      const Tag t = operand_tags[0];
      if (width == 4) return static_cast<Tag>(t & kTagAllLanes);
      return tag_is_sensitive(t) ? lane_mask(width) : kTagClean;
    }
    case OpClass::jump:
      return kTagClean;
  }
  return kTagClean;
}

/// Outcome of one instruction step. On any non-Continue, non-Halted event the
/// instruction did not retire: pc, instret and memory are unchanged, and a
/// violating store is not visible anywhere.
struct StepEvent {
  enum class Kind {
    cont,
    halted,
    dift_violation,
    mem_fault,
    illegal_instruction,
  };

  Kind kind = Kind::cont;
  uint32_t exit_code = 0;                         // halted
  uint32_t pc = 0;                                // dift_violation, illegal_instruction
  uint32_t addr = 0;                              // dift_violation, mem_fault
  Tag tag = kTagClean;                            // dift_violation (always nonzero)
  MemFaultKind fault = MemFaultKind::unmapped;    // mem_fault
  uint32_t word = 0;                              // illegal_instruction

  bool operator==(const StepEvent&) const = default;

  static StepEvent cont() { return {}; }
  static StepEvent halted(uint32_t code) {
    StepEvent e;
    e.kind = Kind::halted;
    e.exit_code = code;
    return e;
  }
  static StepEvent violation(uint32_t pc, uint32_t addr, Tag tag) {
    StepEvent e;
    e.kind = Kind::dift_violation;
    e.pc = pc;
    e.addr = addr;
    e.tag = tag;
    return e;
  }
  static StepEvent mem_fault(MemFaultKind kind, uint32_t addr) {
    StepEvent e;
    e.kind = Kind::mem_fault;
    e.fault = kind;
    e.addr = addr;
    return e;
  }
  static StepEvent illegal(uint32_t word, uint32_t pc) {
    StepEvent e;
    e.kind = Kind::illegal_instruction;
    e.word = word;
    e.pc = pc;
    return e;
  }
};

namespace detail {

inline void write_reg(CpuState& cpu, uint8_t rd, uint32_t value, Tag tag) {
  if (rd != 0) cpu.regs[rd] = {value, static_cast<Tag>(tag & kTagAllLanes)};
}

inline uint32_t width_of(Op op) {
  switch (op) {
    case Op::lb: case Op::lbu: case Op::sb: return 1;
    case Op::lh: case Op::lhu: case Op::sh: return 2;
    default: return 4;
  }
}

}  // namespace detail

/// Executes one instruction: fetch, decode, RV32I semantics, tag propagation,
/// sink checking. A store of tagged data into a sink range returns
/// DiftViolation without performing the write.
inline StepEvent step(CpuState& cpu, MemoryMap& mem, const PolicyConfig& policy) {
  using detail::width_of;
  using detail::write_reg;

  if (cpu.halted) return StepEvent::halted(0);

  uint32_t word;
  try {
    word = mem.fetch(cpu.pc);
  } catch (const MemFault& f) {
    return StepEvent::mem_fault(f.kind(), f.addr());
  }
  const auto decoded = decode(word);
  if (!decoded) return StepEvent::illegal(word, cpu.pc);
  const Instruction& in = *decoded;

  const RegEntry rs1 = cpu.regs[in.rs1];
  const RegEntry rs2 = cpu.regs[in.rs2];
  const PropagationMode mode = policy.propagation;
  uint32_t next_pc = cpu.pc + 4;
  StepEvent ev = StepEvent::cont();

  const auto alu1 = [&](uint32_t value) {
    const Tag tags[] = {rs1.tag};
    write_reg(cpu, in.rd, value, propagate_tag(OpClass::alu, mode, tags));
  };
  const auto alu2 = [&](uint32_t value) {
    const Tag tags[] = {rs1.tag, rs2.tag};
    write_reg(cpu, in.rd, value, propagate_tag(OpClass::alu, mode, tags));
  };
  // Control transfer with the RV32I alignment rule: a taken target that is
  // not 4-byte aligned faults at the jump, before any state changes.
  const auto take_branch = [&](uint32_t target) -> bool {
    if (target % 4 != 0) {
      ev = StepEvent::mem_fault(MemFaultKind::misaligned, target);
      return false;
    }
    next_pc = target;
    return true;
  };

  switch (in.op) {
    case Op::lui:
      write_reg(cpu, in.rd, static_cast<uint32_t>(in.imm), kTagClean);
      break;
    case Op::auipc:
      write_reg(cpu, in.rd, cpu.pc + static_cast<uint32_t>(in.imm), kTagClean);
      break;
    case Op::jal: {
      if (!take_branch(cpu.pc + static_cast<uint32_t>(in.imm))) return ev;
      write_reg(cpu, in.rd, cpu.pc + 4, kTagClean);
      break;
    }
    case Op::jalr: {
      const uint32_t target = (rs1.value + static_cast<uint32_t>(in.imm)) & ~1u;
      if (!take_branch(target)) return ev;
      write_reg(cpu, in.rd, cpu.pc + 4, kTagClean);
      break;
    }
    case Op::beq: case Op::bne: case Op::blt:
    case Op::bge: case Op::bltu: case Op::bgeu: {
      bool taken = false;
      switch (in.op) {
        case Op::beq: taken = rs1.value == rs2.value; break;
        case Op::bne: taken = rs1.value != rs2.value; break;
        case Op::blt: taken = static_cast<int32_t>(rs1.value) < static_cast<int32_t>(rs2.value); break;
        case Op::bge: taken = static_cast<int32_t>(rs1.value) >= static_cast<int32_t>(rs2.value); break;
        case Op::bltu: taken = rs1.value < rs2.value; break;
        case Op::bgeu: taken = rs1.value >= rs2.value; break;
        default: break;
      }
      if (taken && !take_branch(cpu.pc + static_cast<uint32_t>(in.imm))) return ev;
      break;
    }
    case Op::lb: case Op::lh: case Op::lw: case Op::lbu: case Op::lhu: {
      const uint32_t addr = rs1.value + static_cast<uint32_t>(in.imm);
      const unsigned width = width_of(in.op);
      ReadResult rr;
      try {
        rr = mem.read(addr, width);
      } catch (const MemFault& f) {
        return StepEvent::mem_fault(f.kind(), f.addr());
      }
      uint32_t value = rr.value;
      if (in.op == Op::lb) value = static_cast<uint32_t>(static_cast<int32_t>(static_cast<int8_t>(value)));
      if (in.op == Op::lh) value = static_cast<uint32_t>(static_cast<int32_t>(static_cast<int16_t>(value)));
      const Tag tags[] = {rr.tag_bits};
      write_reg(cpu, in.rd, value, propagate_tag(OpClass::load, mode, tags, width));
      break;
    }
    case Op::sb: case Op::sh: case Op::sw: {
      const uint32_t addr = rs1.value + static_cast<uint32_t>(in.imm);
      const unsigned width = width_of(in.op);
      const Tag tags[] = {rs2.tag};
      const Tag wtag = propagate_tag(OpClass::store, mode, tags, width);
      // Policy check before the bus sees the store: sensitive data must not
      // reach a sink. The write is suppressed entirely.
      if (tag_is_sensitive(wtag) && policy.store_hits_sink(addr, width))
        return StepEvent::violation(cpu.pc, addr, wtag);
      const uint32_t value = (width == 4) ? rs2.value : rs2.value & ((1u << (8 * width)) - 1u);
      try {
        mem.write(addr, width, value, wtag);
      } catch (const MemFault& f) {
        return StepEvent::mem_fault(f.kind(), f.addr());
      }
      break;
    }
    case Op::addi: alu1(rs1.value + static_cast<uint32_t>(in.imm)); break;
    case Op::slti: alu1(static_cast<int32_t>(rs1.value) < in.imm ? 1 : 0); break;
    case Op::sltiu: alu1(rs1.value < static_cast<uint32_t>(in.imm) ? 1 : 0); break;
    case Op::xori: alu1(rs1.value ^ static_cast<uint32_t>(in.imm)); break;
    case Op::ori: alu1(rs1.value | static_cast<uint32_t>(in.imm)); break;
    case Op::andi: alu1(rs1.value & static_cast<uint32_t>(in.imm)); break;
    case Op::slli: alu1(rs1.value << in.imm); break;
    case Op::srli: alu1(rs1.value >> in.imm); break;
    case Op::srai: alu1(static_cast<uint32_t>(static_cast<int32_t>(rs1.value) >> in.imm)); break;
    case Op::add: alu2(rs1.value + rs2.value); break;
    case Op::sub: alu2(rs1.value - rs2.value); break;
    case Op::sll: alu2(rs1.value << (rs2.value & 0x1F)); break;
    case Op::slt: alu2(static_cast<int32_t>(rs1.value) < static_cast<int32_t>(rs2.value) ? 1 : 0); break;
    case Op::sltu: alu2(rs1.value < rs2.value ? 1 : 0); break;
    case Op::xor_: alu2(rs1.value ^ rs2.value); break;
    case Op::srl: alu2(rs1.value >> (rs2.value & 0x1F)); break;
    case Op::sra: alu2(static_cast<uint32_t>(static_cast<int32_t>(rs1.value) >> (rs2.value & 0x1F))); break;
    case Op::or_: alu2(rs1.value | rs2.value); break;
    case Op::and_: alu2(rs1.value & rs2.value); break;
    case Op::ecall:
      // Bare-metal halt convention: exit with the code in a0.
      cpu.halted = true;
      ev = StepEvent::halted(cpu.regs[10].value);
      break;
    case Op::ebreak:
      cpu.halted = true;
      ev = StepEvent::halted(0);
      break;
    case Op::dift_untag:
      if (policy.untag_enabled) cpu.regs[in.rd].tag = kTagClean;
      break;
  }

  // Retire.
  cpu.pc = next_pc;
  cpu.regs[0] = RegEntry{};
  cpu.instret += 1;
  return ev;
}

/// Result of run(): the event that stopped execution (Continue when the step
/// budget ran out), the retired-instruction count and a state snapshot.
struct RunOutcome {
  StepEvent last;
  bool timed_out = false;
  uint64_t instret = 0;
  CpuState cpu;
};

inline RunOutcome run(CpuState& cpu, MemoryMap& mem, const PolicyConfig& policy,
                      uint64_t max_steps) {
  assert(max_steps > 0);
  RunOutcome out;
  for (uint64_t i = 0; i < max_steps; ++i) {
    const StepEvent ev = step(cpu, mem, policy);
    if (ev.kind != StepEvent::Kind::cont) {
      out.last = ev;
      out.instret = cpu.instret;
      out.cpu = cpu;
      return out;
    }
  }
  out.last = StepEvent::cont();
  out.timed_out = true;
  out.instret = cpu.instret;
  out.cpu = cpu;
  return out;
}

}  // namespace diftsim

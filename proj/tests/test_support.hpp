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

// Shared fixtures and independent oracles. Everything here is deliberately
// written without reusing the implementation paths it checks.

#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <random>
#include <string_view>
#include <vector>

#include "diftsim/assembler.hpp"
#include "diftsim/cpu.hpp"
#include "diftsim/image.hpp"
#include "diftsim/instruction.hpp"
#include "diftsim/memory_map.hpp"
#include "diftsim/soc.hpp"

namespace testsup {

// ---------------------------------------------------------------------------
// Blur oracle: brute-force neighborhood gathering, independent of blur_kernel.

inline diftsim::Image oracle_blur(const diftsim::Image& in, const diftsim::PatchParams& p) {
  diftsim::Image out = in;
  for (uint32_t r = 0; r < in.rows; ++r) {
    for (uint32_t c = 0; c < in.cols; ++c) {
      const bool in_patch = r >= p.i_row && r < p.e_row && c >= p.i_col && c < p.e_col;
      if (!in_patch) continue;
      std::vector<int> neighborhood;
      for (int rr = static_cast<int>(r) - 1; rr <= static_cast<int>(r) + 1; ++rr) {
        for (int cc = static_cast<int>(c) - 1; cc <= static_cast<int>(c) + 1; ++cc) {
          if (rr < 0 || cc < 0) continue;
          if (rr >= static_cast<int>(in.rows) || cc >= static_cast<int>(in.cols)) continue;
          neighborhood.push_back(in.at(static_cast<uint32_t>(rr), static_cast<uint32_t>(cc)));
        }
      }
      const int sum = std::accumulate(neighborhood.begin(), neighborhood.end(), 0);
      out.at(r, c) = static_cast<uint8_t>(sum / static_cast<int>(neighborhood.size()));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Image generators.

inline diftsim::Image checkerboard(uint32_t rows, uint32_t cols) {
  diftsim::Image img = diftsim::Image::filled(rows, cols, 0);
  for (uint32_t r = 0; r < rows; ++r)
    for (uint32_t c = 0; c < cols; ++c)
      img.at(r, c) = ((r + c) & 1) ? 255 : 0;
  return img;
}

inline diftsim::Image random_image(std::mt19937& rng, uint32_t rows, uint32_t cols) {
  diftsim::Image img = diftsim::Image::filled(rows, cols, 0);
  std::uniform_int_distribution<int> pix(0, 255);
  for (auto& p : img.pixels) p = static_cast<uint8_t>(pix(rng));
  return img;
}

inline diftsim::PatchParams random_patch(std::mt19937& rng, uint32_t rows, uint32_t cols) {
  std::uniform_int_distribution<uint32_t> rr(0, rows);
  std::uniform_int_distribution<uint32_t> cc(0, cols);
  uint32_t r0 = rr(rng), r1 = rr(rng);
  uint32_t c0 = cc(rng), c1 = cc(rng);
  if (r0 > r1) std::swap(r0, r1);
  if (c0 > c1) std::swap(c0, c1);
  return {r0, r1, c0, c1};
}

// ---------------------------------------------------------------------------
// Minimal system for CPU-level tests: executable RAM at 0, data RAM and the
// output port at the default addresses.

struct MiniSoc {
  std::unique_ptr<diftsim::MemoryMap> mem = std::make_unique<diftsim::MemoryMap>();
  diftsim::CpuState cpu;
  diftsim::PolicyConfig policy;
  std::shared_ptr<diftsim::SinkPort> sink = std::make_shared<diftsim::SinkPort>();
};

inline constexpr uint32_t kDataBase = diftsim::soc_layout::kDataBase;
inline constexpr uint32_t kSinkBase = diftsim::soc_layout::kSinkBase;

inline MiniSoc make_minisoc(std::string_view source) {
  MiniSoc soc;
  soc.mem->add_ram({0, 32 * 1024, diftsim::RegionKind::ram, /*executable=*/true});
  soc.mem->add_ram({kDataBase, 32 * 1024, diftsim::RegionKind::ram, false});
  soc.mem->map_device({kSinkBase, 4, diftsim::RegionKind::mmio, false}, soc.sink);
  soc.policy.sink_ranges = {{kSinkBase, 4}};
  const diftsim::AsmProgram prog = diftsim::assemble(source);
  soc.mem->load_blob(prog.origin, prog.to_bytes());
  soc.cpu.pc = prog.origin;
  return soc;
}

inline diftsim::RunOutcome run_source(std::string_view source, uint64_t max_steps = 100000) {
  MiniSoc soc = make_minisoc(source);
  return diftsim::run(soc.cpu, *soc.mem, soc.policy, max_steps);
}

// ---------------------------------------------------------------------------
// Safe random program generator for the taint-soundness property: programs
// terminate (control flow only moves forward), never touch memory outside
// data RAM, and never overwrite the pointer register. Run over an all-clean
// initial state they must not manufacture a single tag bit.

inline std::vector<uint32_t> random_safe_program(std::mt19937& rng, unsigned body_len) {
  using diftsim::Instruction;
  using diftsim::Op;
  std::vector<Instruction> body;

  const uint8_t ptr_reg = 5;  // holds the data RAM base for every access
  std::uniform_int_distribution<int> reg_pick(0, 31);
  const auto pick_rd = [&]() -> uint8_t {
    uint8_t r;
    do {
      r = static_cast<uint8_t>(reg_pick(rng));
    } while (r == ptr_reg);
    return r;
  };
  std::uniform_int_distribution<int> imm12(-2048, 2047);
  std::uniform_int_distribution<int> shamt(0, 31);
  std::uniform_int_distribution<int> off_word(0, 511);
  std::uniform_int_distribution<int> kind(0, 9);

  for (unsigned i = 0; i < body_len; ++i) {
    Instruction in;
    switch (kind(rng)) {
      case 0:
      case 1: {  // R-type ALU
        static const Op rops[] = {Op::add, Op::sub, Op::sll, Op::slt, Op::sltu,
                                  Op::xor_, Op::srl, Op::sra, Op::or_, Op::and_};
        in = {rops[static_cast<size_t>(rng() % 10)], pick_rd(),
              static_cast<uint8_t>(reg_pick(rng)), static_cast<uint8_t>(reg_pick(rng)), 0};
        break;
      }
      case 2:
      case 3: {  // I-type ALU
        static const Op iops[] = {Op::addi, Op::slti, Op::sltiu, Op::xori, Op::ori, Op::andi};
        in = {iops[static_cast<size_t>(rng() % 6)], pick_rd(),
              static_cast<uint8_t>(reg_pick(rng)), 0, imm12(rng)};
        break;
      }
      case 4: {  // shift immediate
        static const Op sops[] = {Op::slli, Op::srli, Op::srai};
        in = {sops[static_cast<size_t>(rng() % 3)], pick_rd(),
              static_cast<uint8_t>(reg_pick(rng)), 0, shamt(rng)};
        break;
      }
      case 5: {  // load, word-range offsets inside data RAM
        static const Op lops[] = {Op::lb, Op::lh, Op::lw, Op::lbu, Op::lhu};
        const Op op = lops[static_cast<size_t>(rng() % 5)];
        int off = off_word(rng) * 4;
        if (op == Op::lh || op == Op::lhu) off += 2 * static_cast<int>(rng() % 2);
        if (op == Op::lb || op == Op::lbu) off += static_cast<int>(rng() % 4);
        in = {op, pick_rd(), ptr_reg, 0, off};
        break;
      }
      case 6: {  // store
        static const Op sops[] = {Op::sb, Op::sh, Op::sw};
        const Op op = sops[static_cast<size_t>(rng() % 3)];
        int off = off_word(rng) * 4;
        if (op == Op::sh) off += 2 * static_cast<int>(rng() % 2);
        if (op == Op::sb) off += static_cast<int>(rng() % 4);
        in = {op, 0, ptr_reg, static_cast<uint8_t>(reg_pick(rng)), off};
        break;
      }
      case 7: {  // forward branch, stays inside program
        static const Op bops[] = {Op::beq, Op::bne, Op::blt, Op::bge, Op::bltu, Op::bgeu};
        const unsigned remaining = body_len - i;
        const int skip = 1 + static_cast<int>(rng() % std::max(1u, std::min(remaining, 8u)));
        in = {bops[static_cast<size_t>(rng() % 6)], 0, static_cast<uint8_t>(reg_pick(rng)),
              static_cast<uint8_t>(reg_pick(rng)), 4 * skip};
        break;
      }
      case 8: {  // lui / auipc / forward jal
        const int which = static_cast<int>(rng() % 3);
        if (which == 0) {
          in = {Op::lui, pick_rd(), 0, 0,
                static_cast<int32_t>((rng() & 0xFFFFF) << 12)};
        } else if (which == 1) {
          in = {Op::auipc, pick_rd(), 0, 0,
                static_cast<int32_t>((rng() & 0xFFFFF) << 12)};
        } else {
          const unsigned remaining = body_len - i;
          const int skip = 1 + static_cast<int>(rng() % std::max(1u, std::min(remaining, 8u)));
          in = {Op::jal, pick_rd(), 0, 0, 4 * skip};
        }
        break;
      }
      default:
        in = {Op::dift_untag, pick_rd(), 0, 0, 0};
        break;
    }
    body.push_back(in);
  }

  std::vector<uint32_t> words;
  // Preamble: point the pointer register at data RAM.
  words.push_back(diftsim::encode({Op::lui, ptr_reg, 0, 0,
                                   static_cast<int32_t>(kDataBase)}));
  for (const Instruction& in : body) words.push_back(diftsim::encode(in));
  words.push_back(diftsim::encode({Op::ebreak, 0, 0, 0, 0}));
  return words;
}

}  // namespace testsup

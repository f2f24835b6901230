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
#include <optional>
#include <stdexcept>
#include <string>

namespace diftsim {

// RV32I base instructions plus dift.untag, the explicit declassification
// instruction (custom-0 opcode space).
enum class Op : uint8_t {
  lui, auipc, jal, jalr,
  beq, bne, blt, bge, bltu, bgeu,
  lb, lh, lw, lbu, lhu,
  sb, sh, sw,
  addi, slti, sltiu, xori, ori, andi, slli, srli, srai,
  add, sub, sll, slt, sltu, xor_, srl, sra, or_, and_,
  ecall, ebreak,
  dift_untag,
};

/// Decoded instruction. Field use depends on the form:
///  - lui/auipc keep `imm` as the already-shifted 32-bit value (low 12 bits 0)
///  - shifts keep the shift amount 0..31 in `imm`
///  - branches and jal keep the byte offset (always even) in `imm`
struct Instruction {
  Op op = Op::addi;
  uint8_t rd = 0;
  uint8_t rs1 = 0;
  uint8_t rs2 = 0;
  int32_t imm = 0;

  bool operator==(const Instruction&) const = default;
};

namespace opcode {
inline constexpr uint32_t kLoad = 0b0000011;
inline constexpr uint32_t kCustom0 = 0b0001011;  // dift.untag
inline constexpr uint32_t kOpImm = 0b0010011;
inline constexpr uint32_t kAuipc = 0b0010111;
inline constexpr uint32_t kStore = 0b0100011;
inline constexpr uint32_t kOp = 0b0110011;
inline constexpr uint32_t kLui = 0b0110111;
inline constexpr uint32_t kBranch = 0b1100011;
inline constexpr uint32_t kJalr = 0b1100111;
inline constexpr uint32_t kJal = 0b1101111;
inline constexpr uint32_t kSystem = 0b1110011;
}  // namespace opcode

inline constexpr uint32_t kEcallWord = 0x00000073;
inline constexpr uint32_t kEbreakWord = 0x00100073;

/// Decodes one word, or nullopt for encodings outside the supported subset.
inline std::optional<Instruction> decode(uint32_t w) {
  const uint32_t op = w & 0x7F;
  const auto rd = static_cast<uint8_t>((w >> 7) & 0x1F);
  const uint32_t funct3 = (w >> 12) & 0x7;
  const auto rs1 = static_cast<uint8_t>((w >> 15) & 0x1F);
  const auto rs2 = static_cast<uint8_t>((w >> 20) & 0x1F);
  const uint32_t funct7 = w >> 25;

  const int32_t imm_i = static_cast<int32_t>(w) >> 20;
  const int32_t imm_s = ((static_cast<int32_t>(w) >> 20) & ~0x1F) | static_cast<int32_t>((w >> 7) & 0x1F);
  const int32_t imm_b = ((static_cast<int32_t>(w) >> 19) & ~0xFFF) |
                        static_cast<int32_t>(((w >> 7) & 0x1) << 11) |
                        static_cast<int32_t>(((w >> 25) & 0x3F) << 5) |
                        static_cast<int32_t>(((w >> 8) & 0xF) << 1);
  const int32_t imm_u = static_cast<int32_t>(w & 0xFFFFF000u);
  const int32_t imm_j = ((static_cast<int32_t>(w) >> 11) & ~0xFFFFF) |
                        static_cast<int32_t>(w & 0xFF000) |
                        static_cast<int32_t>(((w >> 20) & 0x1) << 11) |
                        static_cast<int32_t>(((w >> 21) & 0x3FF) << 1);

  const auto make = [&](Op o, uint8_t d, uint8_t s1, uint8_t s2, int32_t imm) {
    return Instruction{o, d, s1, s2, imm};
  };

  switch (op) {
    case opcode::kLui:
      return make(Op::lui, rd, 0, 0, imm_u);
    case opcode::kAuipc:
      return make(Op::auipc, rd, 0, 0, imm_u);
    case opcode::kJal:
      return make(Op::jal, rd, 0, 0, imm_j);
    case opcode::kJalr:
      if (funct3 != 0) return std::nullopt;
      return make(Op::jalr, rd, rs1, 0, imm_i);
    case opcode::kBranch: {
      Op b;
      switch (funct3) {
        case 0b000: b = Op::beq; break;
        case 0b001: b = Op::bne; break;
        case 0b100: b = Op::blt; break;
        case 0b101: b = Op::bge; break;
        case 0b110: b = Op::bltu; break;
        case 0b111: b = Op::bgeu; break;
        default: return std::nullopt;
      }
      return make(b, 0, rs1, rs2, imm_b);
    }
    case opcode::kLoad: {
      Op l;
      switch (funct3) {
        case 0b000: l = Op::lb; break;
        case 0b001: l = Op::lh; break;
        case 0b010: l = Op::lw; break;
        case 0b100: l = Op::lbu; break;
        case 0b101: l = Op::lhu; break;
        default: return std::nullopt;
      }
      return make(l, rd, rs1, 0, imm_i);
    }
    case opcode::kStore: {
      Op s;
      switch (funct3) {
        case 0b000: s = Op::sb; break;
        case 0b001: s = Op::sh; break;
        case 0b010: s = Op::sw; break;
        default: return std::nullopt;
      }
      return make(s, 0, rs1, rs2, imm_s);
    }
    case opcode::kOpImm:
      switch (funct3) {
        case 0b000: return make(Op::addi, rd, rs1, 0, imm_i);
        case 0b010: return make(Op::slti, rd, rs1, 0, imm_i);
        case 0b011: return make(Op::sltiu, rd, rs1, 0, imm_i);
        case 0b100: return make(Op::xori, rd, rs1, 0, imm_i);
        case 0b110: return make(Op::ori, rd, rs1, 0, imm_i);
        case 0b111: return make(Op::andi, rd, rs1, 0, imm_i);
        case 0b001:
          if (funct7 != 0) return std::nullopt;
          return make(Op::slli, rd, rs1, 0, static_cast<int32_t>(rs2));
        case 0b101:
          if (funct7 == 0b0000000) return make(Op::srli, rd, rs1, 0, static_cast<int32_t>(rs2));
          if (funct7 == 0b0100000) return make(Op::srai, rd, rs1, 0, static_cast<int32_t>(rs2));
          return std::nullopt;
      }
      return std::nullopt;
    case opcode::kOp: {
      Op r;
      if (funct7 == 0b0000000) {
        switch (funct3) {
          case 0b000: r = Op::add; break;
          case 0b001: r = Op::sll; break;
          case 0b010: r = Op::slt; break;
          case 0b011: r = Op::sltu; break;
          case 0b100: r = Op::xor_; break;
          case 0b101: r = Op::srl; break;
          case 0b110: r = Op::or_; break;
          case 0b111: r = Op::and_; break;
          default: return std::nullopt;
        }
      } else if (funct7 == 0b0100000) {
        switch (funct3) {
          case 0b000: r = Op::sub; break;
          case 0b101: r = Op::sra; break;
          default: return std::nullopt;
        }
      } else {
        return std::nullopt;
      }
      return make(r, rd, rs1, rs2, 0);
    }
    case opcode::kSystem:
      if (w == kEcallWord) return make(Op::ecall, 0, 0, 0, 0);
      if (w == kEbreakWord) return make(Op::ebreak, 0, 0, 0, 0);
      return std::nullopt;
    case opcode::kCustom0:
      // dift.untag rd: funct3 0, funct7 0, rs1 = rs2 = x0.
      if (funct3 != 0 || funct7 != 0 || rs1 != 0 || rs2 != 0) return std::nullopt;
      return make(Op::dift_untag, rd, 0, 0, 0);
    default:
      return std::nullopt;
  }
}

/// Thrown by encode() for field values outside their bit widths.
class EncodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const char* what) {
  if (!ok) throw EncodeError(what);
}

inline void check_reg(uint8_t r) { require(r < 32, "register index out of range"); }

inline bool fits_signed(int64_t v, unsigned bits) {
  const int64_t lo = -(int64_t{1} << (bits - 1));
  const int64_t hi = (int64_t{1} << (bits - 1)) - 1;
  return v >= lo && v <= hi;
}

inline uint32_t enc_r(uint32_t funct7, uint8_t rs2, uint8_t rs1, uint32_t funct3,
                      uint8_t rd, uint32_t op) {
  return (funct7 << 25) | (uint32_t{rs2} << 20) | (uint32_t{rs1} << 15) |
         (funct3 << 12) | (uint32_t{rd} << 7) | op;
}

inline uint32_t enc_i(int32_t imm, uint8_t rs1, uint32_t funct3, uint8_t rd, uint32_t op) {
  require(fits_signed(imm, 12), "immediate does not fit 12 signed bits");
  return (static_cast<uint32_t>(imm & 0xFFF) << 20) | (uint32_t{rs1} << 15) |
         (funct3 << 12) | (uint32_t{rd} << 7) | op;
}

inline uint32_t enc_s(int32_t imm, uint8_t rs2, uint8_t rs1, uint32_t funct3, uint32_t op) {
  require(fits_signed(imm, 12), "store offset does not fit 12 signed bits");
  const uint32_t u = static_cast<uint32_t>(imm & 0xFFF);
  return ((u >> 5) << 25) | (uint32_t{rs2} << 20) | (uint32_t{rs1} << 15) |
         (funct3 << 12) | ((u & 0x1F) << 7) | op;
}

inline uint32_t enc_b(int32_t imm, uint8_t rs2, uint8_t rs1, uint32_t funct3, uint32_t op) {
  require((imm & 1) == 0, "branch offset must be even");
  require(fits_signed(imm, 13), "branch offset does not fit 13 signed bits");
  const uint32_t u = static_cast<uint32_t>(imm);
  return (((u >> 12) & 0x1) << 31) | (((u >> 5) & 0x3F) << 25) | (uint32_t{rs2} << 20) |
         (uint32_t{rs1} << 15) | (funct3 << 12) | (((u >> 1) & 0xF) << 8) |
         (((u >> 11) & 0x1) << 7) | op;
}

inline uint32_t enc_j(int32_t imm, uint8_t rd, uint32_t op) {
  require((imm & 1) == 0, "jump offset must be even");
  require(fits_signed(imm, 21), "jump offset does not fit 21 signed bits");
  const uint32_t u = static_cast<uint32_t>(imm);
  return (((u >> 20) & 0x1) << 31) | (((u >> 1) & 0x3FF) << 21) | (((u >> 11) & 0x1) << 20) |
         (((u >> 12) & 0xFF) << 12) | (uint32_t{rd} << 7) | op;
}

inline uint32_t enc_u(int32_t imm, uint8_t rd, uint32_t op) {
  require((static_cast<uint32_t>(imm) & 0xFFF) == 0, "upper immediate has nonzero low bits");
  return static_cast<uint32_t>(imm) | (uint32_t{rd} << 7) | op;
}

inline uint32_t enc_shift(uint32_t funct7, int32_t shamt, uint8_t rs1, uint32_t funct3,
                          uint8_t rd) {
  require(shamt >= 0 && shamt < 32, "shift amount out of range");
  return enc_r(funct7, static_cast<uint8_t>(shamt), rs1, funct3, rd, opcode::kOpImm);
}

}  // namespace detail

/// Inverse of decode() on the supported subset. Throws EncodeError when a
/// field does not fit.
inline uint32_t encode(const Instruction& in) {
  using namespace detail;
  check_reg(in.rd);
  check_reg(in.rs1);
  check_reg(in.rs2);
  switch (in.op) {
    case Op::lui: return enc_u(in.imm, in.rd, opcode::kLui);
    case Op::auipc: return enc_u(in.imm, in.rd, opcode::kAuipc);
    case Op::jal: return enc_j(in.imm, in.rd, opcode::kJal);
    case Op::jalr: return enc_i(in.imm, in.rs1, 0b000, in.rd, opcode::kJalr);
    case Op::beq: return enc_b(in.imm, in.rs2, in.rs1, 0b000, opcode::kBranch);
    case Op::bne: return enc_b(in.imm, in.rs2, in.rs1, 0b001, opcode::kBranch);
    case Op::blt: return enc_b(in.imm, in.rs2, in.rs1, 0b100, opcode::kBranch);
    case Op::bge: return enc_b(in.imm, in.rs2, in.rs1, 0b101, opcode::kBranch);
    case Op::bltu: return enc_b(in.imm, in.rs2, in.rs1, 0b110, opcode::kBranch);
    case Op::bgeu: return enc_b(in.imm, in.rs2, in.rs1, 0b111, opcode::kBranch);
    case Op::lb: return enc_i(in.imm, in.rs1, 0b000, in.rd, opcode::kLoad);
    case Op::lh: return enc_i(in.imm, in.rs1, 0b001, in.rd, opcode::kLoad);
    case Op::lw: return enc_i(in.imm, in.rs1, 0b010, in.rd, opcode::kLoad);
    case Op::lbu: return enc_i(in.imm, in.rs1, 0b100, in.rd, opcode::kLoad);
    case Op::lhu: return enc_i(in.imm, in.rs1, 0b101, in.rd, opcode::kLoad);
    case Op::sb: return enc_s(in.imm, in.rs2, in.rs1, 0b000, opcode::kStore);
    case Op::sh: return enc_s(in.imm, in.rs2, in.rs1, 0b001, opcode::kStore);
    case Op::sw: return enc_s(in.imm, in.rs2, in.rs1, 0b010, opcode::kStore);
    case Op::addi: return enc_i(in.imm, in.rs1, 0b000, in.rd, opcode::kOpImm);
    case Op::slti: return enc_i(in.imm, in.rs1, 0b010, in.rd, opcode::kOpImm);
    case Op::sltiu: return enc_i(in.imm, in.rs1, 0b011, in.rd, opcode::kOpImm);
    case Op::xori: return enc_i(in.imm, in.rs1, 0b100, in.rd, opcode::kOpImm);
    case Op::ori: return enc_i(in.imm, in.rs1, 0b110, in.rd, opcode::kOpImm);
    case Op::andi: return enc_i(in.imm, in.rs1, 0b111, in.rd, opcode::kOpImm);
    case Op::slli: return enc_shift(0b0000000, in.imm, in.rs1, 0b001, in.rd);
    case Op::srli: return enc_shift(0b0000000, in.imm, in.rs1, 0b101, in.rd);
    case Op::srai: return enc_shift(0b0100000, in.imm, in.rs1, 0b101, in.rd);
    case Op::add: return enc_r(0b0000000, in.rs2, in.rs1, 0b000, in.rd, opcode::kOp);
    case Op::sub: return enc_r(0b0100000, in.rs2, in.rs1, 0b000, in.rd, opcode::kOp);
    case Op::sll: return enc_r(0b0000000, in.rs2, in.rs1, 0b001, in.rd, opcode::kOp);
    case Op::slt: return enc_r(0b0000000, in.rs2, in.rs1, 0b010, in.rd, opcode::kOp);
    case Op::sltu: return enc_r(0b0000000, in.rs2, in.rs1, 0b011, in.rd, opcode::kOp);
    case Op::xor_: return enc_r(0b0000000, in.rs2, in.rs1, 0b100, in.rd, opcode::kOp);
    case Op::srl: return enc_r(0b0000000, in.rs2, in.rs1, 0b101, in.rd, opcode::kOp);
    case Op::sra: return enc_r(0b0100000, in.rs2, in.rs1, 0b101, in.rd, opcode::kOp);
    case Op::or_: return enc_r(0b0000000, in.rs2, in.rs1, 0b110, in.rd, opcode::kOp);
    case Op::and_: return enc_r(0b0000000, in.rs2, in.rs1, 0b111, in.rd, opcode::kOp);
    case Op::ecall: return kEcallWord;
    case Op::ebreak: return kEbreakWord;
    case Op::dift_untag: return (uint32_t{in.rd} << 7) | opcode::kCustom0;
  }
  throw EncodeError("unsupported instruction form");
}

inline const char* mnemonic(Op op) {
  switch (op) {
    case Op::lui: return "lui";
    case Op::auipc: return "auipc";
    case Op::jal: return "jal";
    case Op::jalr: return "jalr";
    case Op::beq: return "beq";
    case Op::bne: return "bne";
    case Op::blt: return "blt";
    case Op::bge: return "bge";
    case Op::bltu: return "bltu";
    case Op::bgeu: return "bgeu";
    case Op::lb: return "lb";
    case Op::lh: return "lh";
    case Op::lw: return "lw";
    case Op::lbu: return "lbu";
    case Op::lhu: return "lhu";
    case Op::sb: return "sb";
    case Op::sh: return "sh";
    case Op::sw: return "sw";
    case Op::addi: return "addi";
    case Op::slti: return "slti";
    case Op::sltiu: return "sltiu";
    case Op::xori: return "xori";
    case Op::ori: return "ori";
    case Op::andi: return "andi";
    case Op::slli: return "slli";
    case Op::srli: return "srli";
    case Op::srai: return "srai";
    case Op::add: return "add";
    case Op::sub: return "sub";
    case Op::sll: return "sll";
    case Op::slt: return "slt";
    case Op::sltu: return "sltu";
    case Op::xor_: return "xor";
    case Op::srl: return "srl";
    case Op::sra: return "sra";
    case Op::or_: return "or";
    case Op::and_: return "and";
    case Op::ecall: return "ecall";
    case Op::ebreak: return "ebreak";
    case Op::dift_untag: return "dift.untag";
  }
  return "?";
}

/// Textual form that re-assembles to the same word; ".word 0x..." fallback
/// for anything outside the supported subset. Numeric branch and jump
/// targets are printed as signed offsets relative to the instruction.
inline std::string disassemble(uint32_t word) {
  const auto in = decode(word);
  char buf[48];
  if (!in) {
    std::snprintf(buf, sizeof buf, ".word 0x%08x", word);
    return buf;
  }
  const char* m = mnemonic(in->op);
  switch (in->op) {
    case Op::lui:
    case Op::auipc:
      std::snprintf(buf, sizeof buf, "%s x%u, 0x%x", m, in->rd,
                    static_cast<uint32_t>(in->imm) >> 12);
      break;
    case Op::jal:
      std::snprintf(buf, sizeof buf, "%s x%u, %d", m, in->rd, in->imm);
      break;
    case Op::jalr:
      std::snprintf(buf, sizeof buf, "%s x%u, %d(x%u)", m, in->rd, in->imm, in->rs1);
      break;
    case Op::beq: case Op::bne: case Op::blt:
    case Op::bge: case Op::bltu: case Op::bgeu:
      std::snprintf(buf, sizeof buf, "%s x%u, x%u, %d", m, in->rs1, in->rs2, in->imm);
      break;
    case Op::lb: case Op::lh: case Op::lw: case Op::lbu: case Op::lhu:
      std::snprintf(buf, sizeof buf, "%s x%u, %d(x%u)", m, in->rd, in->imm, in->rs1);
      break;
    case Op::sb: case Op::sh: case Op::sw:
      std::snprintf(buf, sizeof buf, "%s x%u, %d(x%u)", m, in->rs2, in->imm, in->rs1);
      break;
    case Op::addi: case Op::slti: case Op::sltiu:
    case Op::xori: case Op::ori: case Op::andi:
    case Op::slli: case Op::srli: case Op::srai:
      std::snprintf(buf, sizeof buf, "%s x%u, x%u, %d", m, in->rd, in->rs1, in->imm);
      break;
    case Op::add: case Op::sub: case Op::sll: case Op::slt: case Op::sltu:
    case Op::xor_: case Op::srl: case Op::sra: case Op::or_: case Op::and_:
      std::snprintf(buf, sizeof buf, "%s x%u, x%u, x%u", m, in->rd, in->rs1, in->rs2);
      break;
    case Op::ecall:
    case Op::ebreak:
      std::snprintf(buf, sizeof buf, "%s", m);
      break;
    case Op::dift_untag:
      std::snprintf(buf, sizeof buf, "%s x%u", m, in->rd);
      break;
  }
  return buf;
}

}  // namespace diftsim

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

#include "diftsim/assembler.hpp"

#include <gtest/gtest.h>

#include <string>
#include <vector>

namespace {

using namespace diftsim;

AsmErrorKind kind_of(const std::string& source) {
  try {
    assemble(source);
  } catch (const AsmError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "assembled without error: " << source;
  return AsmErrorKind::bad_operand;
}

TEST(Assembler, Nop) {
  const AsmProgram p = assemble("nop\n");
  ASSERT_EQ(p.words.size(), 1u);
  EXPECT_EQ(p.words[0], 0x00000013u);
  EXPECT_EQ(p.origin, 0u);
}

TEST(Assembler, AddiFromTheEncodingTable) {
  EXPECT_EQ(assemble("addi x1, x0, 10").words[0], 0x00A00093u);
  EXPECT_EQ(assemble("addi x2, x3, -1").words[0], 0xFFF18113u);
}

TEST(Assembler, SelfBranchHasOffsetZero) {
  const AsmProgram p = assemble("loop: beq x1, x0, loop\n");
  ASSERT_EQ(p.words.size(), 1u);
  EXPECT_EQ(p.words[0], 0x00008063u);
  EXPECT_EQ(p.symbols.at("loop"), 0u);
}

TEST(Assembler, DiftUntag) {
  EXPECT_EQ(assemble("dift.untag x5").words[0], 0x0000028Bu);
  EXPECT_EQ(assemble("dift.untag t0").words[0], 0x0000028Bu);  // t0 == x5
}

TEST(Assembler, AbiRegisterAliases) {
  EXPECT_EQ(assemble("add zero, ra, sp").words[0], assemble("add x0, x1, x2").words[0]);
  EXPECT_EQ(assemble("add s0, fp, a0").words[0], assemble("add x8, x8, x10").words[0]);
  EXPECT_EQ(assemble("add t6, s11, a7").words[0], assemble("add x31, x27, x17").words[0]);
}

TEST(Assembler, BranchTargetsForwardAndBackward) {
  const AsmProgram p = assemble(
      "start: addi x1, x0, 1\n"
      "       beq x1, x0, end\n"
      "       bne x1, x0, start\n"
      "end:   ebreak\n");
  ASSERT_EQ(p.words.size(), 4u);
  // beq at 4 targets 12: offset +8; bne at 8 targets 0: offset -8.
  EXPECT_EQ(decode(p.words[1])->imm, 8);
  EXPECT_EQ(decode(p.words[2])->imm, -8);
}

TEST(Assembler, NumericBranchTargetIsRelative) {
  const AsmProgram p = assemble("beq x0, x0, 8\nnop\nnop\n");
  EXPECT_EQ(decode(p.words[0])->imm, 8);
}

TEST(Assembler, LiExpansion) {
  // Small constants: one addi.
  const AsmProgram small = assemble("li a0, -5");
  ASSERT_EQ(small.words.size(), 1u);
  EXPECT_EQ(*decode(small.words[0]), (Instruction{Op::addi, 10, 0, 0, -5}));

  // Page-aligned constants: one lui.
  const AsmProgram page = assemble("li t2, 0x1a300000");
  ASSERT_EQ(page.words.size(), 1u);
  EXPECT_EQ(*decode(page.words[0]),
            (Instruction{Op::lui, 7, 0, 0, static_cast<int32_t>(0x1A300000)}));

  // General constants: lui plus addi with sign fixup.
  const AsmProgram gen = assemble("li s1, 0x12345678");
  ASSERT_EQ(gen.words.size(), 2u);
  EXPECT_EQ(*decode(gen.words[0]), (Instruction{Op::lui, 9, 0, 0, 0x12345000}));
  EXPECT_EQ(*decode(gen.words[1]), (Instruction{Op::addi, 9, 9, 0, 0x678}));

  // Fixup case: low part is negative.
  const AsmProgram fix = assemble("li s2, 0x12345FFF");
  ASSERT_EQ(fix.words.size(), 2u);
  EXPECT_EQ(*decode(fix.words[0]), (Instruction{Op::lui, 18, 0, 0, 0x12346000}));
  EXPECT_EQ(*decode(fix.words[1]), (Instruction{Op::addi, 18, 18, 0, -1}));

  // Extremes.
  const AsmProgram min = assemble("li a1, -2147483648");
  ASSERT_EQ(min.words.size(), 1u);
  EXPECT_EQ(*decode(min.words[0]),
            (Instruction{Op::lui, 11, 0, 0, static_cast<int32_t>(0x80000000)}));
  const AsmProgram max = assemble("li a2, 0x7fffffff");
  ASSERT_EQ(max.words.size(), 2u);
}

TEST(Assembler, PseudoInstructions) {
  EXPECT_EQ(assemble("mv a0, a1").words[0], assemble("addi x10, x11, 0").words[0]);
  const AsmProgram j = assemble("j next\nnop\nnext: ebreak\n");
  EXPECT_EQ(*decode(j.words[0]), (Instruction{Op::jal, 0, 0, 0, 8}));
  const AsmProgram jal1 = assemble("jal next\nnop\nnext: ebreak\n");
  EXPECT_EQ(*decode(jal1.words[0]), (Instruction{Op::jal, 1, 0, 0, 8}));
}

TEST(Assembler, DirectivesOrgEquWord) {
  const AsmProgram p = assemble(
      ".equ BASE, 0x100\n"
      ".org 0x40\n"
      "start: lw a0, 0(sp)\n"
      ".word 0xdeadbeef\n"
      ".word start\n"
      "addi a0, a0, BASE\n");
  EXPECT_EQ(p.origin, 0x40u);
  ASSERT_EQ(p.words.size(), 4u);
  EXPECT_EQ(p.symbols.at("start"), 0x40u);
  EXPECT_EQ(p.words[1], 0xDEADBEEFu);
  EXPECT_EQ(p.words[2], 0x40u);  // labels are absolute in .word
  EXPECT_EQ(decode(p.words[3])->imm, 0x100);
}

// Shifting a program with .org moves every label by the same delta and
// leaves all pc-relative instruction words unchanged; only absolute .word
// references move.
TEST(Assembler, OrgRelocationProperty) {
  const char* body =
      "start:  li t0, 0\n"
      "loop:   addi t0, t0, 1\n"
      "        blt t0, t1, loop\n"
      "        jal x1, start\n"
      "        .word loop\n"
      "end:    ebreak\n";
  const AsmProgram base = assemble(std::string(".org 0x0\n") + body);
  const AsmProgram moved = assemble(std::string(".org 0x1000\n") + body);
  ASSERT_EQ(base.words.size(), moved.words.size());
  for (const auto& [name, addr] : base.symbols)
    EXPECT_EQ(moved.symbols.at(name), addr + 0x1000) << name;
  for (size_t i = 0; i < base.words.size(); ++i) {
    if (i == 4) {
      EXPECT_EQ(moved.words[i], base.words[i] + 0x1000);  // the .word reference
    } else {
      EXPECT_EQ(moved.words[i], base.words[i]) << "word " << i;
    }
  }
}

TEST(Assembler, DeterministicOutput) {
  const char* src =
      "start: li a0, 1234\n"
      "       addi a0, a0, -1\n"
      "       bne a0, x0, start\n"
      "       ebreak\n";
  const AsmProgram a = assemble(src);
  const AsmProgram b = assemble(src);
  EXPECT_EQ(a.words, b.words);
  EXPECT_EQ(a.symbols, b.symbols);
}

TEST(Assembler, CommentsAndBlankLines) {
  const AsmProgram p = assemble(
      "# leading comment\n"
      "\n"
      "   nop   # trailing comment\n"
      "# done\n");
  ASSERT_EQ(p.words.size(), 1u);
  EXPECT_EQ(p.words[0], 0x00000013u);
}

TEST(Assembler, ErrorImmediateOutOfRange) {
  EXPECT_EQ(kind_of("addi x1, x0, 5000"), AsmErrorKind::range_overflow);
  EXPECT_EQ(kind_of("addi x1, x0, -2049"), AsmErrorKind::range_overflow);
}

TEST(Assembler, ErrorUnknownMnemonic) {
  EXPECT_EQ(kind_of("mul x1, x2, x3"), AsmErrorKind::unknown_mnemonic);
  EXPECT_EQ(kind_of(".data\n"), AsmErrorKind::unknown_mnemonic);
}

TEST(Assembler, ErrorDuplicateLabel) {
  EXPECT_EQ(kind_of("a: nop\na: nop\n"), AsmErrorKind::duplicate_label);
  EXPECT_EQ(kind_of(".equ a, 1\na: nop\n"), AsmErrorKind::duplicate_label);
}

TEST(Assembler, ErrorUndefinedLabel) {
  EXPECT_EQ(kind_of("beq x0, x0, nowhere\n"), AsmErrorKind::undefined_label);
  EXPECT_EQ(kind_of("li a0, NOT_AN_EQU\n"), AsmErrorKind::undefined_label);
}

TEST(Assembler, ErrorBadOperands) {
  EXPECT_EQ(kind_of("addi x1, x0\n"), AsmErrorKind::bad_operand);
  EXPECT_EQ(kind_of("add x1, x2, 5\n"), AsmErrorKind::bad_operand);
  EXPECT_EQ(kind_of("lw x1, x2\n"), AsmErrorKind::bad_operand);
}

TEST(Assembler, ErrorLocationIsReported) {
  try {
    assemble("nop\nnop\naddi x1, x0, 99999\n");
    FAIL() << "expected an error";
  } catch (const AsmError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.kind(), AsmErrorKind::range_overflow);
  }
}

TEST(Assembler, ProgramBytesAreLittleEndian) {
  const AsmProgram p = assemble("addi x1, x0, 10\n");
  const std::vector<uint8_t> bytes = p.to_bytes();
  ASSERT_EQ(bytes.size(), 4u);
  EXPECT_EQ(bytes[0], 0x93);
  EXPECT_EQ(bytes[1], 0x00);
  EXPECT_EQ(bytes[2], 0xA0);
  EXPECT_EQ(bytes[3], 0x00);
}

}  // namespace

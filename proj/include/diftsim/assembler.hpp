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

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "diftsim/instruction.hpp"

namespace diftsim {

enum class AsmErrorKind {
  unknown_mnemonic,
  bad_operand,
  duplicate_label,
  undefined_label,
  range_overflow,
};

inline const char* to_string(AsmErrorKind k) {
  switch (k) {
    case AsmErrorKind::unknown_mnemonic: return "unknown mnemonic";
    case AsmErrorKind::bad_operand: return "bad operand";
    case AsmErrorKind::duplicate_label: return "duplicate label";
    case AsmErrorKind::undefined_label: return "undefined label";
    case AsmErrorKind::range_overflow: return "range overflow";
  }
  return "?";
}

/// First error found while assembling; line and column are 1-based and point
/// into the source text. Assembly aborts at the first error.
class AsmError : public std::runtime_error {
 public:
  AsmError(int line, int col, AsmErrorKind kind, const std::string& message)
      : std::runtime_error(format(line, col, kind, message)),
        line_(line), col_(col), kind_(kind) {}

  int line() const noexcept { return line_; }
  int col() const noexcept { return col_; }
  AsmErrorKind kind() const noexcept { return kind_; }

 private:
  static std::string format(int line, int col, AsmErrorKind kind, const std::string& msg) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%d:%d: ", line, col);
    return buf + std::string(to_string(kind)) + ": " + msg;
  }

  int line_;
  int col_;
  AsmErrorKind kind_;
};

struct AsmProgram {
  uint32_t origin = 0;
  std::vector<uint32_t> words;
  std::map<std::string, uint32_t> symbols;  // labels only, not .equ constants

  /// Raw little-endian word stream, the program-image format the loader and
  /// the `asm` CLI use.
  std::vector<uint8_t> to_bytes() const {
    std::vector<uint8_t> out;
    out.reserve(words.size() * 4);
    for (uint32_t w : words) {
      out.push_back(static_cast<uint8_t>(w));
      out.push_back(static_cast<uint8_t>(w >> 8));
      out.push_back(static_cast<uint8_t>(w >> 16));
      out.push_back(static_cast<uint8_t>(w >> 24));
    }
    return out;
  }
};

namespace asm_detail {

struct Token {
  std::string text;
  int col = 0;
};

struct Stmt {
  int line = 0;
  int col = 0;
  std::string mnemonic;       // lowercase instruction or directive (with dot)
  std::vector<Token> ops;
  uint32_t addr = 0;          // filled in by pass 1
};

inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

// Splits one source line into label definitions and at most one statement.
// Operands are comma-separated; '#' starts a comment.
struct LineParts {
  std::vector<Token> labels;
  std::optional<Stmt> stmt;
};

inline LineParts split_line(std::string_view line, int line_no) {
  LineParts out;
  const size_t hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);

  size_t i = 0;
  const auto skip_ws = [&] {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
  };

  // Leading labels: "name:".
  for (;;) {
    skip_ws();
    size_t j = i;
    while (j < line.size() && is_ident_char(line[j])) ++j;
    if (j > i && j < line.size() && line[j] == ':') {
      out.labels.push_back({std::string(line.substr(i, j - i)), static_cast<int>(i) + 1});
      i = j + 1;
      continue;
    }
    break;
  }

  skip_ws();
  if (i >= line.size()) return out;

  Stmt stmt;
  stmt.line = line_no;
  stmt.col = static_cast<int>(i) + 1;
  size_t j = i;
  while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
  stmt.mnemonic = std::string(line.substr(i, j - i));
  for (char& c : stmt.mnemonic) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  i = j;

  // Comma-separated operand list; an operand may contain spaces around it
  // but not inside (parenthesised forms like "8(sp)" carry no spaces).
  while (true) {
    skip_ws();
    if (i >= line.size()) break;
    size_t start = i;
    while (i < line.size() && line[i] != ',') ++i;
    size_t end = i;
    while (end > start && std::isspace(static_cast<unsigned char>(line[end - 1]))) --end;
    if (end > start)
      stmt.ops.push_back({std::string(line.substr(start, end - start)), static_cast<int>(start) + 1});
    else
      stmt.ops.push_back({std::string(), static_cast<int>(start) + 1});
    if (i < line.size() && line[i] == ',') ++i;
  }
  out.stmt = std::move(stmt);
  return out;
}

inline std::optional<uint8_t> parse_register(std::string_view s) {
  static const std::map<std::string_view, uint8_t> aliases = {
      {"zero", 0}, {"ra", 1}, {"sp", 2}, {"gp", 3}, {"tp", 4},
      {"t0", 5}, {"t1", 6}, {"t2", 7},
      {"s0", 8}, {"fp", 8}, {"s1", 9},
      {"a0", 10}, {"a1", 11}, {"a2", 12}, {"a3", 13},
      {"a4", 14}, {"a5", 15}, {"a6", 16}, {"a7", 17},
      {"s2", 18}, {"s3", 19}, {"s4", 20}, {"s5", 21}, {"s6", 22},
      {"s7", 23}, {"s8", 24}, {"s9", 25}, {"s10", 26}, {"s11", 27},
      {"t3", 28}, {"t4", 29}, {"t5", 30}, {"t6", 31},
  };
  if (const auto it = aliases.find(s); it != aliases.end()) return it->second;
  if (s.size() >= 2 && s[0] == 'x') {
    unsigned v = 0;
    for (size_t i = 1; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
      v = v * 10 + static_cast<unsigned>(s[i] - '0');
      if (v > 31) return std::nullopt;
    }
    return static_cast<uint8_t>(v);
  }
  return std::nullopt;
}

inline std::optional<int64_t> parse_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  bool neg = false;
  size_t i = 0;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i >= s.size()) return std::nullopt;
  uint64_t value = 0;
  if (s.size() - i > 2 && s[i] == '0' && (s[i + 1] == 'x' || s[i + 1] == 'X')) {
    for (i += 2; i < s.size(); ++i) {
      const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(s[i])));
      unsigned digit;
      if (c >= '0' && c <= '9') digit = static_cast<unsigned>(c - '0');
      else if (c >= 'a' && c <= 'f') digit = static_cast<unsigned>(c - 'a' + 10);
      else return std::nullopt;
      value = value * 16 + digit;
      if (value > 0xFFFFFFFFull) return std::nullopt;
    }
  } else {
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
      value = value * 10 + static_cast<unsigned>(s[i] - '0');
      if (value > 0xFFFFFFFFull) return std::nullopt;
    }
  }
  return neg ? -static_cast<int64_t>(value) : static_cast<int64_t>(value);
}

// "imm(reg)" memory operand.
struct MemOperand {
  std::string imm_text;
  uint8_t reg = 0;
};

inline std::optional<MemOperand> parse_mem_operand(std::string_view s) {
  const size_t open = s.find('(');
  if (open == std::string_view::npos || s.empty() || s.back() != ')') return std::nullopt;
  const auto reg = parse_register(s.substr(open + 1, s.size() - open - 2));
  if (!reg) return std::nullopt;
  return MemOperand{std::string(s.substr(0, open)), *reg};
}

}  // namespace asm_detail

/// Two-pass assembler for the supported RV32I subset plus dift.untag.
/// Pass 1 collects labels, .org and .equ and sizes every statement; pass 2
/// encodes. Supports '#' comments, "name:" labels, the directives
/// .org/.word/.equ, and the pseudo-instructions nop, mv, li and j.
class Assembler {
 public:
  AsmProgram assemble(std::string_view source) {
    program_ = AsmProgram{};
    equs_.clear();
    stmts_.clear();
    origin_set_ = false;

    // Pass 1: layout.
    uint32_t lc = 0;  // location counter, absolute address
    int line_no = 0;
    size_t pos = 0;
    while (pos <= source.size()) {
      const size_t eol = source.find('\n', pos);
      const std::string_view line =
          source.substr(pos, eol == std::string_view::npos ? source.size() - pos : eol - pos);
      ++line_no;
      auto parts = asm_detail::split_line(line, line_no);
      for (const auto& label : parts.labels) {
        if (program_.symbols.count(label.text) || equs_.count(label.text))
          throw AsmError(line_no, label.col, AsmErrorKind::duplicate_label, label.text);
        program_.symbols.emplace(label.text, lc);
      }
      if (parts.stmt) {
        asm_detail::Stmt& st = *parts.stmt;
        if (st.mnemonic == ".org") {
          lc = do_org(st, lc);
        } else if (st.mnemonic == ".equ") {
          do_equ(st);
        } else {
          if (!origin_set_) {
            program_.origin = lc;
            origin_set_ = true;
          }
          st.addr = lc;
          lc += size_of(st);
          stmts_.push_back(std::move(st));
        }
      }
      if (eol == std::string_view::npos) break;
      pos = eol + 1;
    }

    // Pass 2: encode.
    program_.words.assign((lc - program_.origin) / 4, 0);
    for (const asm_detail::Stmt& st : stmts_) encode_stmt(st);
    return program_;
  }

 private:
  using Stmt = asm_detail::Stmt;
  using Token = asm_detail::Token;

  [[noreturn]] void fail(const Stmt& st, AsmErrorKind kind, const std::string& msg) const {
    throw AsmError(st.line, st.col, kind, msg);
  }
  [[noreturn]] void fail(const Stmt& st, const Token& tok, AsmErrorKind kind,
                         const std::string& msg) const {
    throw AsmError(st.line, tok.col, kind, msg);
  }

  const Token& operand(const Stmt& st, size_t i, size_t expected) const {
    if (st.ops.size() != expected)
      fail(st, AsmErrorKind::bad_operand,
           st.mnemonic + " expects " + std::to_string(expected) + " operand(s)");
    return st.ops[i];
  }

  uint8_t reg_operand(const Stmt& st, const Token& tok) const {
    const auto r = asm_detail::parse_register(tok.text);
    if (!r) fail(st, tok, AsmErrorKind::bad_operand, "not a register: " + tok.text);
    return *r;
  }

  // Constant resolvable during pass 1: numeric literal or an .equ defined
  // earlier in the file. Needed to size li.
  int64_t const_value(const Stmt& st, const Token& tok) const {
    if (const auto n = asm_detail::parse_number(tok.text)) return *n;
    if (const auto it = equs_.find(tok.text); it != equs_.end()) return it->second;
    if (program_.symbols.count(tok.text) || looks_like_ident(tok.text))
      fail(st, tok, AsmErrorKind::undefined_label,
           tok.text + " is not a constant known at this point");
    fail(st, tok, AsmErrorKind::bad_operand, "not a constant: " + tok.text);
  }

  // Pass-2 value: numeric literal, .equ constant or label address.
  int64_t resolve(const Stmt& st, const Token& tok) const {
    if (const auto n = asm_detail::parse_number(tok.text)) return *n;
    if (const auto it = equs_.find(tok.text); it != equs_.end()) return it->second;
    if (const auto it = program_.symbols.find(tok.text); it != program_.symbols.end())
      return it->second;
    fail(st, tok, AsmErrorKind::undefined_label, tok.text);
  }

  // Branch and jump targets: a label resolves to (label - pc); a bare number
  // is taken as the signed offset itself.
  int64_t target_offset(const Stmt& st, const Token& tok, uint32_t pc) const {
    if (const auto n = asm_detail::parse_number(tok.text)) return *n;
    if (const auto it = program_.symbols.find(tok.text); it != program_.symbols.end())
      return static_cast<int64_t>(it->second) - static_cast<int64_t>(pc);
    fail(st, tok, AsmErrorKind::undefined_label, tok.text);
  }

  static bool looks_like_ident(std::string_view s) {
    if (s.empty()) return false;
    if (std::isdigit(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
      if (!asm_detail::is_ident_char(c)) return false;
    return true;
  }

  uint32_t do_org(const Stmt& st, uint32_t lc) {
    const Token& tok = operand(st, 0, 1);
    const int64_t v = const_value(st, tok);
    if (v < 0 || v > 0xFFFFFFFFll || (v % 4) != 0)
      fail(st, tok, AsmErrorKind::bad_operand, ".org address must be a 4-byte aligned word address");
    if (!origin_set_) {
      program_.origin = static_cast<uint32_t>(v);
      origin_set_ = true;
    } else if (static_cast<uint32_t>(v) < lc) {
      fail(st, tok, AsmErrorKind::bad_operand, ".org cannot move backwards");
    }
    return static_cast<uint32_t>(v);
  }

  void do_equ(const Stmt& st) {
    if (st.ops.size() != 2)
      fail(st, AsmErrorKind::bad_operand, ".equ expects a name and a value");
    const Token& name = st.ops[0];
    if (!looks_like_ident(name.text))
      fail(st, name, AsmErrorKind::bad_operand, "bad .equ name: " + name.text);
    if (equs_.count(name.text) || program_.symbols.count(name.text))
      fail(st, name, AsmErrorKind::duplicate_label, name.text);
    equs_.emplace(name.text, const_value(st, st.ops[1]));
  }

  // li expands to one addi when the constant fits 12 signed bits, otherwise
  // lui plus (when the low part is nonzero) addi with the usual sign fixup.
  struct LiExpansion {
    bool has_lui = false;
    bool has_addi = false;
    uint32_t lui_value = 0;  // already shifted
    int32_t addi_imm = 0;
  };

  static LiExpansion li_parts(int64_t value) {
    const auto v = static_cast<int32_t>(static_cast<uint32_t>(value));
    LiExpansion e;
    if (v >= -2048 && v <= 2047) {
      e.has_addi = true;
      e.addi_imm = v;
      return e;
    }
    const uint32_t hi = (static_cast<uint32_t>(v) + 0x800u) & 0xFFFFF000u;
    const int32_t lo = static_cast<int32_t>(static_cast<uint32_t>(v) - hi);
    e.has_lui = true;
    e.lui_value = hi;
    if (lo != 0) {
      e.has_addi = true;
      e.addi_imm = lo;
    }
    return e;
  }

  uint32_t size_of(const Stmt& st) const {
    if (st.mnemonic == ".word") {
      operand(st, 0, 1);
      return 4;
    }
    if (st.mnemonic == "li") {
      const int64_t v = const_value(st, operand(st, 1, 2));
      const LiExpansion e = li_parts(v);
      return (e.has_lui && e.has_addi) ? 8 : 4;
    }
    if (st.mnemonic.size() > 0 && st.mnemonic[0] == '.')
      fail(st, AsmErrorKind::unknown_mnemonic, st.mnemonic);
    return 4;
  }

  void emit(uint32_t addr, uint32_t word) {
    program_.words[(addr - program_.origin) / 4] = word;
  }

  void emit_instr(const Stmt& st, uint32_t addr, const Instruction& in) {
    try {
      emit(addr, encode(in));
    } catch (const EncodeError& e) {
      fail(st, AsmErrorKind::range_overflow, e.what());
    }
  }

  int32_t imm_or_fail(const Stmt& st, const Token& tok, int64_t v) const {
    if (v < INT32_MIN || v > static_cast<int64_t>(UINT32_MAX))
      fail(st, tok, AsmErrorKind::range_overflow, tok.text);
    return static_cast<int32_t>(static_cast<uint32_t>(v));
  }

  void encode_stmt(const Stmt& st) {
    const std::string& m = st.mnemonic;
    const uint32_t pc = st.addr;

    if (m == ".word") {
      const Token& tok = operand(st, 0, 1);
      emit(pc, static_cast<uint32_t>(imm_or_fail(st, tok, resolve(st, tok))));
      return;
    }
    if (m == "nop") {
      operand_count(st, 0);
      emit_instr(st, pc, {Op::addi, 0, 0, 0, 0});
      return;
    }
    if (m == "mv") {
      const uint8_t rd = reg_operand(st, operand(st, 0, 2));
      const uint8_t rs = reg_operand(st, st.ops[1]);
      emit_instr(st, pc, {Op::addi, rd, rs, 0, 0});
      return;
    }
    if (m == "li") {
      const uint8_t rd = reg_operand(st, operand(st, 0, 2));
      const LiExpansion e = li_parts(const_value(st, st.ops[1]));
      uint32_t at = pc;
      if (e.has_lui) {
        emit_instr(st, at, {Op::lui, rd, 0, 0, static_cast<int32_t>(e.lui_value)});
        at += 4;
      }
      if (e.has_addi)
        emit_instr(st, at, {Op::addi, rd, e.has_lui ? rd : uint8_t{0}, 0, e.addi_imm});
      return;
    }
    if (m == "j") {
      const Token& tok = operand(st, 0, 1);
      emit_jump(st, pc, 0, tok);
      return;
    }
    if (m == "jal") {
      // "jal target" defaults the link register to ra.
      if (st.ops.size() == 1) {
        emit_jump(st, pc, 1, st.ops[0]);
      } else {
        const uint8_t rd = reg_operand(st, operand(st, 0, 2));
        emit_jump(st, pc, rd, st.ops[1]);
      }
      return;
    }
    if (m == "jalr") {
      const uint8_t rd = reg_operand(st, operand(st, 0, 2));
      const auto mem = asm_detail::parse_mem_operand(st.ops[1].text);
      if (!mem) fail(st, st.ops[1], AsmErrorKind::bad_operand, "expected offset(reg)");
      const int64_t off = resolve(st, {mem->imm_text, st.ops[1].col});
      emit_instr(st, pc, {Op::jalr, rd, mem->reg, 0, imm_or_fail(st, st.ops[1], off)});
      return;
    }
    if (m == "ecall") {
      operand_count(st, 0);
      emit_instr(st, pc, {Op::ecall, 0, 0, 0, 0});
      return;
    }
    if (m == "ebreak") {
      operand_count(st, 0);
      emit_instr(st, pc, {Op::ebreak, 0, 0, 0, 0});
      return;
    }
    if (m == "dift.untag") {
      const uint8_t rd = reg_operand(st, operand(st, 0, 1));
      emit_instr(st, pc, {Op::dift_untag, rd, 0, 0, 0});
      return;
    }

    if (const auto op = r_type(m)) {
      const uint8_t rd = reg_operand(st, operand(st, 0, 3));
      const uint8_t rs1 = reg_operand(st, st.ops[1]);
      const uint8_t rs2 = reg_operand(st, st.ops[2]);
      emit_instr(st, pc, {*op, rd, rs1, rs2, 0});
      return;
    }
    if (const auto op = i_type(m)) {
      const uint8_t rd = reg_operand(st, operand(st, 0, 3));
      const uint8_t rs1 = reg_operand(st, st.ops[1]);
      const int64_t v = resolve(st, st.ops[2]);
      emit_instr(st, pc, {*op, rd, rs1, 0, imm_or_fail(st, st.ops[2], v)});
      return;
    }
    if (const auto op = load_type(m)) {
      const uint8_t rd = reg_operand(st, operand(st, 0, 2));
      const auto mem = asm_detail::parse_mem_operand(st.ops[1].text);
      if (!mem) fail(st, st.ops[1], AsmErrorKind::bad_operand, "expected offset(reg)");
      const int64_t off = resolve(st, {mem->imm_text, st.ops[1].col});
      emit_instr(st, pc, {*op, rd, mem->reg, 0, imm_or_fail(st, st.ops[1], off)});
      return;
    }
    if (const auto op = store_type(m)) {
      const uint8_t rs2 = reg_operand(st, operand(st, 0, 2));
      const auto mem = asm_detail::parse_mem_operand(st.ops[1].text);
      if (!mem) fail(st, st.ops[1], AsmErrorKind::bad_operand, "expected offset(reg)");
      const int64_t off = resolve(st, {mem->imm_text, st.ops[1].col});
      emit_instr(st, pc, {*op, 0, mem->reg, rs2, imm_or_fail(st, st.ops[1], off)});
      return;
    }
    if (const auto op = branch_type(m)) {
      const uint8_t rs1 = reg_operand(st, operand(st, 0, 3));
      const uint8_t rs2 = reg_operand(st, st.ops[1]);
      const int64_t off = target_offset(st, st.ops[2], pc);
      if (off < INT32_MIN || off > INT32_MAX)
        fail(st, st.ops[2], AsmErrorKind::range_overflow, st.ops[2].text);
      emit_instr(st, pc, {*op, 0, rs1, rs2, static_cast<int32_t>(off)});
      return;
    }
    if (m == "lui" || m == "auipc") {
      const uint8_t rd = reg_operand(st, operand(st, 0, 2));
      const int64_t v = resolve(st, st.ops[1]);
      if (v < 0 || v > 0xFFFFF)
        fail(st, st.ops[1], AsmErrorKind::range_overflow,
             "upper immediate must fit 20 bits");
      emit_instr(st, pc, {m == "lui" ? Op::lui : Op::auipc, rd, 0, 0,
                          static_cast<int32_t>(static_cast<uint32_t>(v) << 12)});
      return;
    }

    fail(st, AsmErrorKind::unknown_mnemonic, m);
  }

  void operand_count(const Stmt& st, size_t expected) const {
    if (st.ops.size() != expected)
      fail(st, AsmErrorKind::bad_operand,
           st.mnemonic + " expects " + std::to_string(expected) + " operand(s)");
  }

  void emit_jump(const Stmt& st, uint32_t pc, uint8_t rd, const Token& target) {
    const int64_t off = target_offset(st, target, pc);
    if (off < INT32_MIN || off > INT32_MAX)
      fail(st, target, AsmErrorKind::range_overflow, target.text);
    emit_instr(st, pc, {Op::jal, rd, 0, 0, static_cast<int32_t>(off)});
  }

  static std::optional<Op> r_type(const std::string& m) {
    if (m == "add") return Op::add;
    if (m == "sub") return Op::sub;
    if (m == "sll") return Op::sll;
    if (m == "slt") return Op::slt;
    if (m == "sltu") return Op::sltu;
    if (m == "xor") return Op::xor_;
    if (m == "srl") return Op::srl;
    if (m == "sra") return Op::sra;
    if (m == "or") return Op::or_;
    if (m == "and") return Op::and_;
    return std::nullopt;
  }
  static std::optional<Op> i_type(const std::string& m) {
    if (m == "addi") return Op::addi;
    if (m == "slti") return Op::slti;
    if (m == "sltiu") return Op::sltiu;
    if (m == "xori") return Op::xori;
    if (m == "ori") return Op::ori;
    if (m == "andi") return Op::andi;
    if (m == "slli") return Op::slli;
    if (m == "srli") return Op::srli;
    if (m == "srai") return Op::srai;
    return std::nullopt;
  }
  static std::optional<Op> load_type(const std::string& m) {
    if (m == "lb") return Op::lb;
    if (m == "lh") return Op::lh;
    if (m == "lw") return Op::lw;
    if (m == "lbu") return Op::lbu;
    if (m == "lhu") return Op::lhu;
    return std::nullopt;
  }
  static std::optional<Op> store_type(const std::string& m) {
    if (m == "sb") return Op::sb;
    if (m == "sh") return Op::sh;
    if (m == "sw") return Op::sw;
    return std::nullopt;
  }
  static std::optional<Op> branch_type(const std::string& m) {
    if (m == "beq") return Op::beq;
    if (m == "bne") return Op::bne;
    if (m == "blt") return Op::blt;
    if (m == "bge") return Op::bge;
    if (m == "bltu") return Op::bltu;
    if (m == "bgeu") return Op::bgeu;
    return std::nullopt;
  }

  AsmProgram program_;
  std::map<std::string, int64_t> equs_;
  std::vector<Stmt> stmts_;
  bool origin_set_ = false;
};

inline AsmProgram assemble(std::string_view source) {
  Assembler as;
  return as.assemble(source);
}

}  // namespace diftsim

// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "micropol/common.hpp"
#include "micropol/tags.hpp"

namespace micropol::target {

using Integer = boost::multiprecision::cpp_int;

/// Symbolic region address. Regions are unordered islands: no arithmetic
/// ever moves a pointer from one region to another.
struct Loc {
  enum class Kind : std::uint8_t { kMethod, kObject, kStack, kBoot };

  Kind kind = Kind::kBoot;
  std::uint64_t first = 0;   // class (method/stack) or object
  std::uint64_t second = 0;  // method index for method regions

  static Loc method(ClassName c, MethodIndex m) {
    return {Kind::kMethod, c.value, m.value};
  }
  static Loc object(ObjectName o) { return {Kind::kObject, o.value, 0}; }
  static Loc stack(ClassName c) { return {Kind::kStack, c.value, 0}; }
  static Loc boot() { return {Kind::kBoot, 0, 0}; }

  ClassName cls() const { return ClassName{first}; }
  ObjectName obj() const { return ObjectName{first}; }
  MethodIndex method_index() const { return MethodIndex{second}; }

  friend auto operator<=>(const Loc&, const Loc&) = default;
};

struct Ptr {
  Loc loc;
  Integer offset;
  friend bool operator==(const Ptr&, const Ptr&) = default;
};

enum class RegName : std::uint8_t {
  r_a,
  r_tgt,
  r_arg,
  r_ret,
  r_aux1,
  r_aux2,
  r_aux3,
  r_sp,
  r_spp,
  r_one,
};
inline constexpr std::size_t kRegisterCount = 10;

inline constexpr std::array<RegName, kRegisterCount> kAllRegisters = {
    RegName::r_a,    RegName::r_tgt,  RegName::r_arg,  RegName::r_ret,
    RegName::r_aux1, RegName::r_aux2, RegName::r_aux3, RegName::r_sp,
    RegName::r_spp,  RegName::r_one};

inline const char* to_string(RegName r) {
  static constexpr const char* kNames[] = {
      "r_a",    "r_tgt",  "r_arg", "r_ret", "r_aux1",
      "r_aux2", "r_aux3", "r_sp",  "r_spp", "r_one"};
  return kNames[static_cast<std::size_t>(r)];
}

using Imm = std::variant<Integer, Ptr>;

enum class Opcode : std::uint8_t {
  kNop,
  kConst,
  kMov,
  kBinop,
  kLoad,
  kStore,
  kJump,
  kJal,
  kBnz,
  kHalt,
};

enum class BinOp : std::uint8_t { kAdd, kSub, kEq };

/// Register roles per opcode:
///   Const imm r1        Mov r1(src) r2(dst)       Binop r1 r2 r3(dst)
///   Load r1(ptr) r2(dst)  Store r1(ptr) r2(src)   Jump r1  Jal r1
///   Bnz r1 imm
struct Instr {
  Opcode op = Opcode::kNop;
  BinOp alu = BinOp::kAdd;
  Imm imm = Integer(0);
  RegName r1 = RegName::r_a;
  RegName r2 = RegName::r_a;
  RegName r3 = RegName::r_a;

  static Instr nop() { return {}; }
  static Instr const_(Imm i, RegName rd) {
    return {Opcode::kConst, BinOp::kAdd, std::move(i), rd};
  }
  static Instr mov(RegName rs, RegName rd) {
    return {Opcode::kMov, BinOp::kAdd, Integer(0), rs, rd};
  }
  static Instr binop(BinOp op, RegName a, RegName b, RegName rd) {
    return {Opcode::kBinop, op, Integer(0), a, b, rd};
  }
  static Instr add(RegName a, RegName b, RegName rd) {
    return binop(BinOp::kAdd, a, b, rd);
  }
  static Instr sub(RegName a, RegName b, RegName rd) {
    return binop(BinOp::kSub, a, b, rd);
  }
  static Instr eq(RegName a, RegName b, RegName rd) {
    return binop(BinOp::kEq, a, b, rd);
  }
  static Instr load(RegName rp, RegName rd) {
    return {Opcode::kLoad, BinOp::kAdd, Integer(0), rp, rd};
  }
  static Instr store(RegName rp, RegName rs) {
    return {Opcode::kStore, BinOp::kAdd, Integer(0), rp, rs};
  }
  static Instr jump(RegName r) {
    return {Opcode::kJump, BinOp::kAdd, Integer(0), r};
  }
  static Instr jal(RegName r) {
    return {Opcode::kJal, BinOp::kAdd, Integer(0), r};
  }
  static Instr bnz(RegName r, Imm i) {
    return {Opcode::kBnz, BinOp::kAdd, std::move(i), r};
  }
  static Instr halt() { return {Opcode::kHalt}; }

  friend bool operator==(const Instr& a, const Instr& b) {
    if (a.op != b.op) return false;
    switch (a.op) {
      case Opcode::kNop:
      case Opcode::kHalt:
        return true;
      case Opcode::kConst:
        return a.imm == b.imm && a.r1 == b.r1;
      case Opcode::kBnz:
        return a.imm == b.imm && a.r1 == b.r1;
      case Opcode::kMov:
      case Opcode::kLoad:
      case Opcode::kStore:
        return a.r1 == b.r1 && a.r2 == b.r2;
      case Opcode::kBinop:
        return a.alu == b.alu && a.r1 == b.r1 && a.r2 == b.r2 &&
               a.r3 == b.r3;
      case Opcode::kJump:
      case Opcode::kJal:
        return a.r1 == b.r1;
    }
    return false;
  }
};

struct Encoded {
  Instr instr;
  friend bool operator==(const Encoded&, const Encoded&) = default;
};

using Word = std::variant<Integer, Ptr, Encoded>;

inline Word encode(Instr i) { return Encoded{std::move(i)}; }
inline Word int_word(long long v) { return Integer(v); }
inline Word ptr_word(Loc l, long long off = 0) { return Ptr{l, Integer(off)}; }

struct Cell {
  Word word;
  MemTag tag;
};

struct Register {
  Word word = Integer(0);
  ValTag tag = ValTag::cleared();
};

struct TaggedMachineState {
  std::map<Loc, std::vector<Cell>> memory;
  std::array<Register, kRegisterCount> registers;
  Ptr pc;
  PcTag pc_tag;

  Register& reg(RegName r) { return registers[static_cast<std::size_t>(r)]; }
  const Register& reg(RegName r) const {
    return registers[static_cast<std::size_t>(r)];
  }

  /// Cell at a pointer, if it denotes a valid address.
  const Cell* cell(const Ptr& p) const {
    auto it = memory.find(p.loc);
    if (it == memory.end() || p.offset < 0 || p.offset >= it->second.size()) {
      return nullptr;
    }
    return &it->second[static_cast<std::size_t>(p.offset)];
  }
  Cell* cell(const Ptr& p) {
    return const_cast<Cell*>(std::as_const(*this).cell(p));
  }
};

/// Everything the transfer function may inspect on one step.
struct MonitorInput {
  Instr instr;
  PcTag pc;
  MemTag ci;                  // current instruction cell
  std::optional<MemTag> ni;   // next instruction cell; absent on Halt
  std::optional<MemTag> mem;  // accessed cell for Load/Store
  std::array<ValTag, kRegisterCount> regs;

  const ValTag& reg(RegName r) const {
    return regs[static_cast<std::size_t>(r)];
  }
};

struct Allow {
  PcTag pc;
  std::vector<std::pair<RegName, ValTag>> reg_writes;  // applied in order
  std::optional<MemTag> mem_write;
  int rule = 0;
};

struct Deny {
  std::string detail;
};

using MonitorDecision = std::variant<Allow, Deny>;

/// Allows every step and never touches a tag.
struct PermitAll {
  MonitorDecision operator()(const MonitorInput& in) const {
    return Allow{in.pc, {}, std::nullopt, 0};
  }
};

enum class FailKind : std::uint8_t {
  kDecode,
  kBadPointer,
  kOutOfRange,
  kEncodedOperand,
  kPointerMisuse,
  kResourceExhaustion,
  kPolicy,
};

struct Failstop {
  FailKind kind;
  std::string detail;
};

inline std::string to_string(const Failstop& f) {
  switch (f.kind) {
    case FailKind::kDecode:
      return "decode";
    case FailKind::kBadPointer:
      return "bad-pointer";
    case FailKind::kOutOfRange:
      return "out-of-range";
    case FailKind::kEncodedOperand:
      return "encoded-operand";
    case FailKind::kPointerMisuse:
      return "pointer-misuse";
    case FailKind::kResourceExhaustion:
      return "resource-exhaustion";
    case FailKind::kPolicy:
      return "policy(" + f.detail + ")";
  }
  return "unknown";
}

struct Next {};
struct Halted {};
using StepResult = std::variant<Next, Halted, Failstop>;

/// Per-step record for traces and coverage.
struct StepRecord {
  Ptr pc;
  std::optional<Instr> instr;
  PcTag pc_tag_before;
  PcTag pc_tag_after;
  int rule = 0;
  std::optional<Ptr> accessed;  // cell read or written by Load/Store
};

inline Failstop decode_failure(const Word& w) {
  return std::holds_alternative<Integer>(w)
             ? Failstop{FailKind::kDecode, "regular word"}
             : Failstop{FailKind::kDecode, "pointer"};
}

/// Symbolic decode: only encoded words hold instructions.
inline std::variant<Instr, Failstop> decode(const Word& w) {
  if (const auto* e = std::get_if<Encoded>(&w)) return e->instr;
  return decode_failure(w);
}

namespace detail {

struct Effects {
  std::vector<std::pair<RegName, Word>> reg_writes;
  std::optional<std::pair<Ptr, Word>> mem_write;
  std::optional<Ptr> accessed;
  Ptr next_pc;
  bool halt = false;
};

inline Failstop out_of_range(const TaggedMachineState& s, const Ptr& p) {
  auto it = s.memory.find(p.loc);
  if (it != s.memory.end() && p.loc.kind == Loc::Kind::kStack &&
      p.offset >= it->second.size()) {
    return {FailKind::kResourceExhaustion, "stack region exhausted"};
  }
  return {FailKind::kOutOfRange, "invalid address"};
}

// Operand as a pointer for Jump/Jal/Load/Store.
inline std::variant<Ptr, Failstop> as_pointer(const Word& w) {
  if (const auto* p = std::get_if<Ptr>(&w)) return *p;
  if (std::holds_alternative<Encoded>(w)) {
    return Failstop{FailKind::kEncodedOperand, "encoded instruction operand"};
  }
  return Failstop{FailKind::kBadPointer, "regular word used as a pointer"};
}

inline std::variant<Word, Failstop> binop(BinOp op, const Word& a,
                                          const Word& b) {
  if (std::holds_alternative<Encoded>(a) || std::holds_alternative<Encoded>(b)) {
    return Failstop{FailKind::kEncodedOperand, "encoded instruction operand"};
  }
  const auto* ai = std::get_if<Integer>(&a);
  const auto* bi = std::get_if<Integer>(&b);
  const auto* ap = std::get_if<Ptr>(&a);
  const auto* bp = std::get_if<Ptr>(&b);
  if (ai && bi) {
    switch (op) {
      case BinOp::kAdd:
        return Word(Integer(*ai + *bi));
      case BinOp::kSub:
        return Word(Integer(*ai - *bi));
      case BinOp::kEq:
        return Word(Integer(*ai == *bi ? 1 : 0));
    }
  }
  if (ap && bi && op != BinOp::kEq) {
    Integer off = op == BinOp::kAdd ? Integer(ap->offset + *bi)
                                     : Integer(ap->offset - *bi);
    return Word(Ptr{ap->loc, off});
  }
  if (ap && bp && op == BinOp::kEq) {
    return Word(Integer(*ap == *bp ? 1 : 0));
  }
  return Failstop{FailKind::kPointerMisuse, "binary operation on a pointer"};
}

inline std::variant<Effects, Failstop> execute(const TaggedMachineState& s,
                                               const Instr& i) {
  Effects fx;
  fx.next_pc = Ptr{s.pc.loc, Integer(s.pc.offset + 1)};
  auto word = [&](RegName r) -> const Word& { return s.reg(r).word; };
  auto encoded = [&](RegName r) {
    return std::holds_alternative<Encoded>(word(r));
  };
  const Failstop enc{FailKind::kEncodedOperand, "encoded instruction operand"};

  switch (i.op) {
    case Opcode::kNop:
      break;
    case Opcode::kConst:
      fx.reg_writes.emplace_back(
          i.r1, std::visit([](const auto& v) { return Word(v); }, i.imm));
      break;
    case Opcode::kMov:
      if (encoded(i.r1)) return enc;
      fx.reg_writes.emplace_back(i.r2, word(i.r1));
      break;
    case Opcode::kBinop: {
      auto r = binop(i.alu, word(i.r1), word(i.r2));
      if (auto* f = std::get_if<Failstop>(&r)) return *f;
      fx.reg_writes.emplace_back(i.r3, std::get<Word>(r));
      break;
    }
    case Opcode::kLoad: {
      auto p = as_pointer(word(i.r1));
      if (auto* f = std::get_if<Failstop>(&p)) return *f;
      const Cell* c = s.cell(std::get<Ptr>(p));
      if (!c) return out_of_range(s, std::get<Ptr>(p));
      fx.accessed = std::get<Ptr>(p);
      fx.reg_writes.emplace_back(i.r2, c->word);
      break;
    }
    case Opcode::kStore: {
      auto p = as_pointer(word(i.r1));
      if (auto* f = std::get_if<Failstop>(&p)) return *f;
      if (encoded(i.r2)) return enc;
      if (!s.cell(std::get<Ptr>(p))) return out_of_range(s, std::get<Ptr>(p));
      fx.accessed = std::get<Ptr>(p);
      fx.mem_write.emplace(std::get<Ptr>(p), word(i.r2));
      break;
    }
    case Opcode::kJump: {
      auto p = as_pointer(word(i.r1));
      if (auto* f = std::get_if<Failstop>(&p)) return *f;
      fx.next_pc = std::get<Ptr>(p);
      break;
    }
    case Opcode::kJal: {
      auto p = as_pointer(word(i.r1));
      if (auto* f = std::get_if<Failstop>(&p)) return *f;
      fx.next_pc = std::get<Ptr>(p);
      fx.reg_writes.emplace_back(RegName::r_a,
                                 Word(Ptr{s.pc.loc, Integer(s.pc.offset + 1)}));
      break;
    }
    case Opcode::kBnz: {
      if (encoded(i.r1)) return enc;
      const auto* v = std::get_if<Integer>(&word(i.r1));
      const auto* off = std::get_if<Integer>(&i.imm);
      if (!v || !off) {
        return Failstop{FailKind::kPointerMisuse, "branch on a pointer"};
      }
      // The offset counts from the instruction after the branch.
      if (*v != 0) fx.next_pc = Ptr{s.pc.loc, Integer(s.pc.offset + 1 + *off)};
      break;
    }
    case Opcode::kHalt:
      fx.halt = true;
      break;
  }
  return fx;
}

}  // namespace detail

/// One machine step under `policy`. Machine-level checks run first; the
/// policy then sees the tags of the step, including the next instruction's.
/// Nothing is mutated unless the step succeeds.
template <class Policy>
StepResult step(TaggedMachineState& s, const Policy& policy,
                StepRecord* record = nullptr) {
  if (record) {
    record->pc = s.pc;
    record->instr.reset();
    record->pc_tag_before = s.pc_tag;
    record->pc_tag_after = s.pc_tag;
    record->rule = 0;
    record->accessed.reset();
  }
  const Cell* ci = s.cell(s.pc);
  if (!ci) return detail::out_of_range(s, s.pc);
  auto decoded = decode(ci->word);
  if (auto* f = std::get_if<Failstop>(&decoded)) return *f;
  const Instr& instr = std::get<Instr>(decoded);
  if (record) record->instr = instr;

  auto executed = detail::execute(s, instr);
  if (auto* f = std::get_if<Failstop>(&executed)) return *f;
  detail::Effects& fx = std::get<detail::Effects>(executed);

  MonitorInput in{instr, s.pc_tag, ci->tag, std::nullopt, std::nullopt, {}};
  if (!fx.halt) {
    const Cell* ni = s.cell(fx.next_pc);
    if (!ni) return detail::out_of_range(s, fx.next_pc);
    in.ni = ni->tag;
  }
  if (fx.accessed) in.mem = s.cell(*fx.accessed)->tag;
  for (std::size_t r = 0; r < kRegisterCount; ++r) {
    in.regs[r] = s.registers[r].tag;
  }

  MonitorDecision d = policy(in);
  if (auto* deny = std::get_if<Deny>(&d)) {
    return Failstop{FailKind::kPolicy, deny->detail};
  }
  Allow& allow = std::get<Allow>(d);

  for (auto& [r, w] : fx.reg_writes) s.reg(r).word = std::move(w);
  if (fx.mem_write) s.cell(fx.mem_write->first)->word = fx.mem_write->second;
  for (const auto& [r, t] : allow.reg_writes) s.reg(r).tag = t;
  if (allow.mem_write) s.cell(*fx.accessed)->tag = *allow.mem_write;
  s.pc_tag = allow.pc;
  if (record) {
    record->pc_tag_after = allow.pc;
    record->rule = allow.rule;
    record->accessed = fx.accessed;
  }
  if (fx.halt) return Halted{};
  s.pc = fx.next_pc;
  return Next{};
}

struct OutOfFuel {};
using RunResult = std::variant<Halted, Failstop, OutOfFuel>;

/// Runs at most `fuel` steps. `observer(state, record, result)` is called
/// after every step, including the final one.
template <class Policy, class Observer>
RunResult run(TaggedMachineState& s, const Policy& policy, std::uint64_t fuel,
              Observer&& observer) {
  StepRecord rec;
  for (std::uint64_t i = 0; i < fuel; ++i) {
    StepResult r = step(s, policy, &rec);
    observer(std::as_const(s), std::as_const(rec), std::as_const(r));
    if (std::holds_alternative<Halted>(r)) return Halted{};
    if (auto* f = std::get_if<Failstop>(&r)) return *f;
  }
  return OutOfFuel{};
}

template <class Policy>
RunResult run(TaggedMachineState& s, const Policy& policy, std::uint64_t fuel) {
  return run(s, policy, fuel, [](const auto&, const auto&, const auto&) {});
}

}  // namespace micropol::target

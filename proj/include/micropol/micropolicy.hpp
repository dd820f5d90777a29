// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "micropol/tags.hpp"
#include "micropol/target.hpp"

namespace micropol::policy {

/// Rule numbers reported in Allow::rule. Halt is always allowed and has no
/// rule of its own.
enum Rule : int {
  kNopOrBnz = 1,
  kConst = 2,
  kConstBlessed = 3,
  kMov = 4,
  kBinop = 5,
  kLoad = 6,
  kStore = 7,
  kJumpInternal = 8,
  kJumpReturn = 9,
  kJalInternal = 10,
  kJalCall = 11,
};
inline constexpr int kRuleCount = 11;

inline const char* rule_name(int rule) {
  switch (rule) {
    case kNopOrBnz:
      return "nop/bnz";
    case kConst:
      return "const";
    case kConstBlessed:
      return "const-blessed";
    case kMov:
      return "mov";
    case kBinop:
      return "binop";
    case kLoad:
      return "load";
    case kStore:
      return "store";
    case kJumpInternal:
      return "jump";
    case kJumpReturn:
      return "jump-return";
    case kJalInternal:
      return "jal";
    case kJalCall:
      return "jal-call";
    default:
      return "halt";
  }
}

using target::Allow;
using target::Deny;
using target::MonitorDecision;
using target::MonitorInput;
using target::Opcode;
using target::RegName;

/// Transfer function of the compartmentalization, call-discipline and
/// dynamic-typing micro-policy.
///
/// Cross-compartment transfers are recognised by comparing the compartment
/// of the next instruction with that of the current one; only Jump and Jal
/// may switch compartments, and only through a return capability or an entry
/// point respectively. Internal calls and returns are left unchecked.
inline MonitorDecision transfer(const MonitorInput& in) {
  const std::uint64_t n = in.pc.depth;
  const ClassName here = in.ci.compartment;
  const target::Instr& i = in.instr;

  if (i.op == Opcode::kHalt) return Allow{in.pc, {}, std::nullopt, 0};

  if (!in.ci.value.is_word()) return Deny{"instruction-cell-not-word"};
  if (in.ci.bless && i.op != Opcode::kConst) return Deny{"blessed-non-const"};
  if (!in.ni) return Deny{"no-next-instruction"};
  const MemTag& ni = *in.ni;
  const bool same = ni.compartment == here;

  auto operand_ok = [](const ValTag& t) {
    return t.is_word() || t.is_obj_ptr();
  };

  switch (i.op) {
    case Opcode::kNop:
      if (!same) return Deny{"nop-cross"};
      return Allow{in.pc, {}, std::nullopt, kNopOrBnz};

    case Opcode::kBnz:
      if (!same) return Deny{"bnz-cross"};
      if (!in.reg(i.r1).is_word()) return Deny{"bnz-tag"};
      return Allow{in.pc, {}, std::nullopt, kNopOrBnz};

    case Opcode::kConst:
      if (!same) return Deny{"const-cross"};
      if (in.ci.bless) {
        return Allow{in.pc, {{i.r1, ValTag::obj_ptr(*in.ci.bless)}},
                     std::nullopt, kConstBlessed};
      }
      return Allow{in.pc, {{i.r1, ValTag::word()}}, std::nullopt, kConst};

    case Opcode::kMov: {
      if (!same) return Deny{"mov-cross"};
      const ValTag vt = in.reg(i.r1);
      // Destination first so that Mov r r still ends up cleared.
      return Allow{in.pc, {{i.r2, vt}, {i.r1, clear(vt)}}, std::nullopt, kMov};
    }

    case Opcode::kBinop:
      if (!same) return Deny{"binop-cross"};
      if (!operand_ok(in.reg(i.r1)) || !operand_ok(in.reg(i.r2))) {
        return Deny{"binop-operand"};
      }
      return Allow{in.pc, {{i.r3, ValTag::word()}}, std::nullopt, kBinop};

    case Opcode::kLoad: {
      if (!same) return Deny{"load-cross"};
      if (!in.reg(i.r1).is_word()) return Deny{"load-pointer-tag"};
      if (!in.mem || in.mem->compartment != here) {
        return Deny{"load-foreign-cell"};
      }
      MemTag cell = *in.mem;
      const ValTag vt = cell.value;
      cell.value = clear(vt);
      return Allow{in.pc, {{i.r2, vt}}, cell, kLoad};
    }

    case Opcode::kStore: {
      if (!same) return Deny{"store-cross"};
      if (!in.reg(i.r1).is_word()) return Deny{"store-pointer-tag"};
      if (!in.mem || in.mem->compartment != here) {
        return Deny{"store-foreign-cell"};
      }
      const ValTag vt = in.reg(i.r2);
      MemTag cell{std::nullopt, here, in.mem->entry, vt};
      return Allow{in.pc, {{i.r2, clear(vt)}}, cell, kStore};
    }

    case Opcode::kJump: {
      const ValTag& rt = in.reg(i.r1);
      if (same) {
        if (!rt.is_word()) return Deny{"jump-internal-tag"};
        return Allow{in.pc, {}, std::nullopt, kJumpInternal};
      }
      if (rt.is_cleared()) return Deny{"jump-cleared-capability"};
      if (!rt.is_ret_cap()) return Deny{"jump-no-capability"};
      if (n == 0 || rt.depth() != n - 1) return Deny{"jump-depth"};
      const ValTag& ret = in.reg(RegName::r_ret);
      if (!ret.is_obj_ptr() || ret.cls() != rt.cls()) {
        return Deny{"jump-ret-type"};
      }
      const ValTag bot = ValTag::cleared();
      return Allow{PcTag{n - 1},
                   {{i.r1, bot},
                    {RegName::r_aux1, bot},
                    {RegName::r_aux2, bot},
                    {RegName::r_aux3, bot},
                    {RegName::r_sp, bot}},
                   std::nullopt,
                   kJumpReturn};
    }

    case Opcode::kJal: {
      if (!in.reg(i.r1).is_word()) return Deny{"jal-pointer-tag"};
      if (same) {
        return Allow{in.pc, {{RegName::r_a, ValTag::word()}}, std::nullopt,
                     kJalInternal};
      }
      if (!ni.entry) return Deny{"jal-non-entry"};
      const ValTag& tgt = in.reg(RegName::r_tgt);
      if (!tgt.is_obj_ptr() || tgt.cls() != ni.compartment) {
        return Deny{"jal-target-type"};
      }
      const ValTag& a = in.reg(RegName::r_arg);
      if (!a.is_obj_ptr() || a.cls() != ni.entry->arg_class) {
        return Deny{"jal-arg-type"};
      }
      const ValTag bot = ValTag::cleared();
      return Allow{PcTag{n + 1},
                   {{RegName::r_a, ValTag::ret_cap(n, ni.entry->result_class)},
                    {RegName::r_ret, bot},
                    {RegName::r_spp, bot},
                    {RegName::r_sp, bot}},
                   std::nullopt,
                   kJalCall};
    }

    case Opcode::kHalt:
      break;
  }
  return Deny{"no-rule"};
}

/// Function object wrapper with per-rule hit counters.
class MicroPolicy {
 public:
  MonitorDecision operator()(const MonitorInput& in) const {
    MonitorDecision d = transfer(in);
    if (auto* a = std::get_if<Allow>(&d)) ++hits_[a->rule];
    return d;
  }

  std::uint64_t hits(int rule) const { return hits_.at(rule); }
  const std::array<std::uint64_t, kRuleCount + 1>& all_hits() const {
    return hits_;
  }
  void merge(const MicroPolicy& other) {
    for (std::size_t r = 0; r < hits_.size(); ++r) hits_[r] += other.hits_[r];
  }

 private:
  mutable std::array<std::uint64_t, kRuleCount + 1> hits_{};
};

}  // namespace micropol::policy

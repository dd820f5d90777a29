// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "micropol/interm.hpp"
#include "micropol/target.hpp"

namespace micropol {

/// A memory region as emitted by the compiler: untagged words at a location.
struct RegionPlan {
  target::Loc location;
  std::vector<target::Word> contents;
};

/// Untagged linkable target program.
struct TargetProgram {
  Interface interface;
  std::map<target::Loc, std::vector<target::Word>> regions;
  friend bool operator==(const TargetProgram&, const TargetProgram&) = default;
};

inline constexpr std::size_t kDefaultStackCapacity = 1024;

/// Number of target instructions one intermediate instruction expands to.
inline std::uint64_t expansion_length(const interm::IInstr& i) {
  using interm::Op;
  switch (i.op) {
    case Op::kDrop:
    case Op::kNop:
    case Op::kHalt:
    case Op::kSkip:
      return 1;
    case Op::kThis:
    case Op::kArg:
      return 2;
    case Op::kRef:
      return 3;
    case Op::kSel:
      return 5;
    case Op::kRet:
    case Op::kSkeq:
      return 6;
    case Op::kUpd:
      return 7;
    case Op::kCall:
      return 18;
  }
  return 0;
}

/// Length of the compiled form of `code`.
inline std::uint64_t length(std::span<const interm::IInstr> code) {
  std::uint64_t n = 0;
  for (const auto& i : code) n += expansion_length(i);
  return n;
}

namespace detail {

using target::Instr;
using target::Loc;
using target::Ptr;
using enum target::RegName;

inline target::Imm imm(long long v) { return target::Integer(v); }
inline target::Imm imm(Loc l) { return Ptr{l, 0}; }

}  // namespace detail

/// Target expansion of `code[at]`. The following instructions are needed
/// because Skip/Skeq branch over the compiled form of the skipped window.
inline std::vector<target::Instr> compile_iinstr(
    ClassName c, std::span<const interm::IInstr> code, std::size_t at) {
  using namespace detail;
  using interm::Op;
  using I = target::Instr;
  const interm::IInstr& i = code[at];

  auto window = [&](std::uint64_t k) {
    std::size_t end = std::min<std::size_t>(code.size(), at + 1 + k);
    return length(code.subspan(at + 1, end - (at + 1)));
  };

  switch (i.op) {
    case Op::kNop:
      return {I::nop()};
    case Op::kHalt:
      return {I::halt()};
    case Op::kThis:
      return {I::add(r_sp, r_one, r_sp), I::store(r_sp, r_tgt)};
    case Op::kArg:
      return {I::add(r_sp, r_one, r_sp), I::store(r_sp, r_arg)};
    case Op::kRef:
      return {I::const_(imm(Loc::object(i.object)), r_aux1),
              I::add(r_sp, r_one, r_sp), I::store(r_sp, r_aux1)};
    case Op::kDrop:
      return {I::sub(r_sp, r_one, r_sp)};
    case Op::kSel:
      return {I::const_(imm(static_cast<long long>(i.index) - 1), r_aux2),
              // pop object to select from
              I::load(r_sp, r_aux1), I::add(r_aux1, r_aux2, r_aux1),
              // load and push field value
              I::load(r_aux1, r_aux1), I::store(r_sp, r_aux1)};
    case Op::kUpd:
      return {I::const_(imm(static_cast<long long>(i.index) - 1), r_aux2),
              // pop new field value and object
              I::load(r_sp, r_aux3), I::sub(r_sp, r_one, r_sp),
              I::load(r_sp, r_aux1),
              // perform update on object
              I::add(r_aux1, r_aux2, r_aux1), I::store(r_aux1, r_aux3),
              // push new field value
              I::store(r_sp, r_aux3)};
    case Op::kCall:
      return {// pop call argument and object
              I::load(r_sp, r_aux2), I::sub(r_sp, r_one, r_sp),
              I::load(r_sp, r_aux1),
              // push current object and argument
              I::store(r_sp, r_tgt), I::add(r_sp, r_one, r_sp),
              I::store(r_sp, r_arg),
              // save stack pointer
              I::store(r_spp, r_sp),
              // set call object and argument
              I::mov(r_aux1, r_tgt), I::mov(r_aux2, r_arg),
              // perform call
              I::const_(imm(Loc::method(i.cls, MethodIndex{i.index})), r_aux3),
              I::jal(r_aux3),
              // reinitialize environment
              I::const_(imm(1), r_one), I::const_(imm(Loc::stack(c)), r_spp),
              I::load(r_spp, r_sp),
              // restore current object and argument
              I::load(r_sp, r_arg), I::sub(r_sp, r_one, r_sp),
              I::load(r_sp, r_tgt),
              // push call result
              I::store(r_sp, r_ret)};
    case Op::kRet:
      return {// pop return value
              I::load(r_sp, r_ret), I::sub(r_sp, r_one, r_sp),
              // pop return address
              I::load(r_sp, r_a), I::sub(r_sp, r_one, r_sp),
              // save stack pointer
              I::store(r_spp, r_sp),
              // perform return
              I::jump(r_a)};
    case Op::kSkip:
      return {I::bnz(r_one, imm(static_cast<long long>(window(i.index))))};
    case Op::kSkeq:
      return {// pop and compare objects
              I::load(r_sp, r_aux2), I::sub(r_sp, r_one, r_sp),
              I::load(r_sp, r_aux1), I::sub(r_sp, r_one, r_sp),
              I::eq(r_aux1, r_aux2, r_aux1),
              // branch according to result
              I::bnz(r_aux1, imm(static_cast<long long>(window(i.index))))};
  }
  return {};
}

/// Prologue: initialize r_one, load the stack pointer, push the return
/// address.
inline std::vector<target::Instr> method_prologue(ClassName c) {
  using namespace detail;
  using I = target::Instr;
  return {I::const_(imm(1), r_one), I::const_(imm(Loc::stack(c)), r_spp),
          I::load(r_spp, r_sp), I::add(r_sp, r_one, r_sp),
          I::store(r_sp, r_a)};
}

inline std::vector<target::Instr> compile_icode(
    ClassName c, std::span<const interm::IInstr> code) {
  std::vector<target::Instr> out;
  for (std::size_t k = 0; k < code.size(); ++k) {
    auto part = compile_iinstr(c, code, k);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

inline RegionPlan compile_imethod(ClassName c, MethodIndex m,
                                  std::span<const interm::IInstr> code) {
  RegionPlan plan{target::Loc::method(c, m), {}};
  for (auto& i : method_prologue(c)) plan.contents.push_back(target::encode(i));
  for (auto& i : compile_icode(c, code)) {
    plan.contents.push_back(target::encode(std::move(i)));
  }
  return plan;
}

/// Object regions, the stack region and one region per method.
inline std::vector<RegionPlan> compile_compartment(
    const interm::ICompartment& ic,
    std::size_t stack_capacity = kDefaultStackCapacity) {
  if (stack_capacity < 1) throw Error("stack capacity must be at least 1");
  std::vector<RegionPlan> out;
  for (const auto& [o, fields] : ic.local_objects) {
    RegionPlan plan{target::Loc::object(o), {}};
    for (ObjectName f : fields) {
      plan.contents.push_back(target::ptr_word(target::Loc::object(f)));
    }
    out.push_back(std::move(plan));
  }
  const target::Loc stack = target::Loc::stack(ic.class_name);
  RegionPlan st{stack, {target::ptr_word(stack, 0)}};
  // Compiled components always start with an empty stack.
  st.contents.resize(stack_capacity + 1, target::int_word(0));
  out.push_back(std::move(st));
  for (std::size_t m = 0; m < ic.methods.size(); ++m) {
    out.push_back(compile_imethod(ic.class_name, MethodIndex{m + 1},
                                  ic.methods[m].code));
  }
  return out;
}

inline TargetProgram compile_to_target(
    const interm::IProgram& p,
    std::size_t stack_capacity = kDefaultStackCapacity) {
  TargetProgram out{p.interface, {}};
  for (const auto& [c, comp] : p.compartments) {
    for (auto& plan : compile_compartment(comp, stack_capacity)) {
      out.regions.emplace(plan.location, std::move(plan.contents));
    }
  }
  return out;
}

}  // namespace micropol

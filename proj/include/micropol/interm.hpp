// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "micropol/common.hpp"
#include "micropol/interfaces.hpp"

namespace micropol::interm {

enum class Op : std::uint8_t {
  kNop,
  kThis,
  kArg,
  kRef,
  kSel,
  kUpd,
  kCall,
  kRet,
  kSkip,
  kSkeq,
  kDrop,
  kHalt,
};

/// One stack-machine instruction. Only the operands of its opcode are
/// meaningful: `object` for Ref, `index` for Sel/Upd (field), Call (method)
/// and Skip/Skeq (count), `cls` for Call.
struct IInstr {
  Op op = Op::kNop;
  ObjectName object{};
  ClassName cls{};
  std::uint64_t index = 0;

  static IInstr nop() { return {Op::kNop}; }
  static IInstr this_() { return {Op::kThis}; }
  static IInstr arg() { return {Op::kArg}; }
  static IInstr ref(ObjectName o) { return {Op::kRef, o}; }
  static IInstr sel(FieldIndex f) { return {Op::kSel, {}, {}, f.value}; }
  static IInstr upd(FieldIndex f) { return {Op::kUpd, {}, {}, f.value}; }
  static IInstr call(ClassName c, MethodIndex m) {
    return {Op::kCall, {}, c, m.value};
  }
  static IInstr ret() { return {Op::kRet}; }
  static IInstr skip(std::uint64_t n) { return {Op::kSkip, {}, {}, n}; }
  static IInstr skeq(std::uint64_t n) { return {Op::kSkeq, {}, {}, n}; }
  static IInstr drop() { return {Op::kDrop}; }
  static IInstr halt() { return {Op::kHalt}; }

  friend bool operator==(const IInstr& a, const IInstr& b) {
    if (a.op != b.op) return false;
    switch (a.op) {
      case Op::kRef:
        return a.object == b.object;
      case Op::kCall:
        return a.cls == b.cls && a.index == b.index;
      case Op::kSel:
      case Op::kUpd:
      case Op::kSkip:
      case Op::kSkeq:
        return a.index == b.index;
      default:
        return true;
    }
  }
};

using ICode = std::vector<IInstr>;

struct IMethod {
  MethodSig sig;
  ICode code;
  friend bool operator==(const IMethod&, const IMethod&) = default;
};

/// A class definition together with all its instances and its local stack.
struct ICompartment {
  ClassName class_name;
  std::vector<ClassName> field_types;
  std::vector<IMethod> methods;
  std::map<ObjectName, std::vector<ObjectName>> local_objects;
  std::vector<ObjectName> local_stack;
  friend bool operator==(const ICompartment&, const ICompartment&) = default;
};

struct IProgram {
  Interface interface;
  std::map<ClassName, ICompartment> compartments;
  friend bool operator==(const IProgram&, const IProgram&) = default;
};

struct IFrame {
  ClassName cls;
  MethodIndex method;
  std::size_t ip = 0;
  ObjectName this_obj;
  ObjectName arg_obj;
};

struct IState {
  std::map<ClassName, ICompartment> compartments;
  std::map<ObjectName, ClassName> object_class;  // derived from local tables
  std::vector<IFrame> frames;
};

struct Next {};
struct Terminated {
  ObjectName result;
};
struct Failstop {
  std::string reason;
};
struct OutOfFuel {};
using StepResult = std::variant<Next, Terminated, Failstop>;
using RunResult = std::variant<Terminated, Failstop, OutOfFuel>;

inline IProgram link_interm(const IProgram& a, const IProgram& b) {
  IProgram out{link_interfaces(a.interface, b.interface), a.compartments};
  for (const auto& [c, comp] : b.compartments) {
    if (!out.compartments.emplace(c, comp).second) {
      throw LinkError("compartment #" + std::to_string(c.value) +
                      " defined by both programs");
    }
  }
  return out;
}

inline IState iload(const IProgram& p) {
  if (!is_complete(p.interface)) {
    throw LinkError("program is not complete: import declarations remain");
  }
  IState s;
  s.compartments = p.compartments;
  for (const auto& [c, comp] : s.compartments) {
    for (const auto& [o, fields] : comp.local_objects) {
      if (!s.object_class.emplace(o, c).second) {
        throw LinkError("object #" + std::to_string(o.value) +
                        " defined by two compartments");
      }
    }
  }
  auto main = s.compartments.find(kMainClass);
  if (main == s.compartments.end() ||
      main->second.methods.size() < kMainMethod.value) {
    throw LinkError("program has no main method (class 0, method 1)");
  }
  if (!main->second.local_objects.contains(kMainObject)) {
    throw LinkError("program has no main object (object 0 of class 0)");
  }
  s.frames.push_back(IFrame{kMainClass, kMainMethod, 0, kMainObject,
                            kMainObject});
  return s;
}

namespace detail {

class IStepper {
 public:
  explicit IStepper(IState& s) : s_(s) {}

  StepResult step() {
    if (s_.frames.empty()) return Failstop{"no active frame"};
    IFrame& f = s_.frames.back();
    ICompartment& comp = s_.compartments.at(f.cls);
    const ICode& code = comp.methods.at(f.method.value - 1).code;
    if (f.ip >= code.size()) return Failstop{"fell off the end of a method"};
    const IInstr instr = code[f.ip];
    auto& stack = comp.local_stack;

    switch (instr.op) {
      case Op::kNop:
        return advance(f, 1);
      case Op::kThis:
        stack.push_back(f.this_obj);
        return advance(f, 1);
      case Op::kArg:
        stack.push_back(f.arg_obj);
        return advance(f, 1);
      case Op::kRef:
        stack.push_back(instr.object);
        return advance(f, 1);
      case Op::kSel: {
        auto o = pop(stack);
        if (!o) return Failstop{"pop from empty stack"};
        auto* fields = local_fields(comp, *o);
        if (!fields) return Failstop{"field access on a non-local object"};
        if (instr.index < 1 || instr.index > fields->size()) {
          return Failstop{"field index out of range"};
        }
        stack.push_back((*fields)[instr.index - 1]);
        return advance(f, 1);
      }
      case Op::kUpd: {
        auto v = pop(stack);
        auto o = pop(stack);
        if (!v || !o) return Failstop{"pop from empty stack"};
        auto* fields = local_fields(comp, *o);
        if (!fields) return Failstop{"field update on a non-local object"};
        if (instr.index < 1 || instr.index > fields->size()) {
          return Failstop{"field index out of range"};
        }
        (*fields)[instr.index - 1] = *v;
        stack.push_back(*v);
        return advance(f, 1);
      }
      case Op::kCall: {
        auto a = pop(stack);
        auto o = pop(stack);
        if (!a || !o) return Failstop{"pop from empty stack"};
        auto oc = s_.object_class.find(*o);
        if (oc == s_.object_class.end() || oc->second != instr.cls) {
          return Failstop{"call target does not have the annotated class"};
        }
        auto callee = s_.compartments.find(instr.cls);
        if (callee == s_.compartments.end() || instr.index < 1 ||
            instr.index > callee->second.methods.size()) {
          return Failstop{"call of unknown method"};
        }
        f.ip += 1;
        // `f` may dangle after the push.
        s_.frames.push_back(
            IFrame{instr.cls, MethodIndex{instr.index}, 0, *o, *a});
        return Next{};
      }
      case Op::kRet: {
        auto v = pop(stack);
        if (!v) return Failstop{"pop from empty stack"};
        s_.frames.pop_back();
        if (s_.frames.empty()) return Terminated{*v};
        s_.compartments.at(s_.frames.back().cls).local_stack.push_back(*v);
        return Next{};
      }
      case Op::kSkip:
        return jump(f, code.size(), 1 + instr.index);
      case Op::kSkeq: {
        auto b = pop(stack);
        auto a = pop(stack);
        if (!a || !b) return Failstop{"pop from empty stack"};
        return jump(f, code.size(), *a == *b ? 1 + instr.index : 1);
      }
      case Op::kDrop:
        if (!pop(stack)) return Failstop{"pop from empty stack"};
        return advance(f, 1);
      case Op::kHalt:
        if (stack.empty()) return Failstop{"halt with an empty stack"};
        return Terminated{stack.back()};
    }
    return Failstop{"unknown instruction"};
  }

 private:
  static std::optional<ObjectName> pop(std::vector<ObjectName>& stack) {
    if (stack.empty()) return std::nullopt;
    ObjectName v = stack.back();
    stack.pop_back();
    return v;
  }

  static std::vector<ObjectName>* local_fields(ICompartment& comp,
                                               ObjectName o) {
    auto it = comp.local_objects.find(o);
    return it == comp.local_objects.end() ? nullptr : &it->second;
  }

  static StepResult advance(IFrame& f, std::size_t n) {
    f.ip += n;
    return Next{};
  }

  static StepResult jump(IFrame& f, std::size_t code_size, std::uint64_t n) {
    if (f.ip + n > code_size) return Failstop{"skip past the end of a method"};
    f.ip += n;
    return Next{};
  }

  IState& s_;
};

}  // namespace detail

inline StepResult istep(IState& s) { return detail::IStepper(s).step(); }

struct RunStats {
  std::uint64_t steps = 0;
};

inline RunResult irun(IState& s, std::uint64_t fuel,
                      RunStats* stats = nullptr) {
  for (std::uint64_t i = 0; i < fuel; ++i) {
    StepResult r = istep(s);
    if (stats) ++stats->steps;
    if (auto* t = std::get_if<Terminated>(&r)) return *t;
    if (auto* f = std::get_if<Failstop>(&r)) return *f;
  }
  return OutOfFuel{};
}

}  // namespace micropol::interm

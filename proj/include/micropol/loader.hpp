// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "micropol/compile_i2t.hpp"
#include "micropol/interfaces.hpp"
#include "micropol/tags.hpp"
#include "micropol/target.hpp"

namespace micropol {

/// Union of the regions of several target components. Interfaces are linked
/// pairwise, left to right.
inline TargetProgram link_target(const std::vector<TargetProgram>& ps) {
  TargetProgram out;
  for (const auto& p : ps) {
    out.interface = link_interfaces(out.interface, p.interface);
    for (const auto& [loc, words] : p.regions) {
      if (loc.kind == target::Loc::Kind::kBoot) {
        throw LinkError("components may not define the boot region");
      }
      if (!out.regions.emplace(loc, words).second) {
        throw LinkError("region defined by two components");
      }
    }
  }
  return out;
}

inline TargetProgram link_target(const TargetProgram& a,
                                 const TargetProgram& b) {
  return link_target(std::vector<TargetProgram>{a, b});
}

/// A failed pre-load check. `check` is the number of the failed check:
///   1 no import is left, 2 every exported method has a code region,
///   3 every exported class has a stack region, 4 every exported object has
///   an object region, 5 no region lacks a matching export.
struct CheckError {
  int check = 0;
  std::string message;
};

namespace detail {

inline std::string loc_id(const target::Loc& l) {
  switch (l.kind) {
    case target::Loc::Kind::kMethod:
      return "methl #" + std::to_string(l.first) + " " +
             std::to_string(l.second);
    case target::Loc::Kind::kObject:
      return "objl #" + std::to_string(l.first);
    case target::Loc::Kind::kStack:
      return "stackl #" + std::to_string(l.first);
    case target::Loc::Kind::kBoot:
      return "boot";
  }
  return "?";
}

// Object named by a pointer to the start of an object region, if any.
inline std::optional<ObjectName> object_pointer(const target::Ptr& p) {
  if (p.loc.kind != target::Loc::Kind::kObject || p.offset != 0) {
    return std::nullopt;
  }
  return p.loc.obj();
}

inline std::optional<ObjectName> object_pointer(const target::Word& w) {
  if (const auto* p = std::get_if<target::Ptr>(&w)) return object_pointer(*p);
  return std::nullopt;
}

inline std::optional<ObjectName> blessed_object(const target::Word& w) {
  const auto* e = std::get_if<target::Encoded>(&w);
  if (!e || e->instr.op != target::Opcode::kConst) return std::nullopt;
  if (const auto* p = std::get_if<target::Ptr>(&e->instr.imm)) {
    return object_pointer(*p);
  }
  return std::nullopt;
}

}  // namespace detail

inline std::vector<CheckError> check_program(const TargetProgram& p) {
  using target::Loc;
  std::vector<CheckError> errs;
  const DeclTable& ex = p.interface.exports;

  for (const auto& [c, d] : p.interface.imports.classes) {
    errs.push_back({1, "class #" + std::to_string(c.value) +
                           " is imported but never defined"});
  }
  for (const auto& [o, d] : p.interface.imports.objects) {
    errs.push_back({1, "object #" + std::to_string(o.value) +
                           " is imported but never defined"});
  }
  for (const auto& [c, d] : ex.classes) {
    for (std::size_t m = 1; m <= d.methods.size(); ++m) {
      auto it = p.regions.find(Loc::method(c, MethodIndex{m}));
      if (it == p.regions.end()) {
        errs.push_back({2, "no code region for exported method " +
                               std::to_string(m) + " of class #" +
                               std::to_string(c.value)});
      } else if (it->second.empty()) {
        errs.push_back({2, "empty code region for exported method " +
                               std::to_string(m) + " of class #" +
                               std::to_string(c.value)});
      }
    }
    if (!p.regions.contains(Loc::stack(c))) {
      errs.push_back({3, "no stack region for exported class #" +
                             std::to_string(c.value)});
    }
  }
  for (const auto& [o, d] : ex.objects) {
    if (!p.regions.contains(Loc::object(o))) {
      errs.push_back({4, "no object region for exported object #" +
                             std::to_string(o.value)});
    }
  }
  for (const auto& [loc, words] : p.regions) {
    bool exported = false;
    switch (loc.kind) {
      case Loc::Kind::kMethod: {
        auto it = ex.classes.find(loc.cls());
        exported = it != ex.classes.end() && loc.second >= 1 &&
                   loc.second <= it->second.methods.size();
        break;
      }
      case Loc::Kind::kObject:
        exported = ex.objects.contains(loc.obj());
        break;
      case Loc::Kind::kStack:
        exported = ex.classes.contains(loc.cls());
        break;
      case Loc::Kind::kBoot:
        break;
    }
    if (!exported) {
      errs.push_back({5, "region " + detail::loc_id(loc) +
                             " has no matching export"});
    }
  }
  // Every object named by a pointer or a Const must be exported, so that the
  // loader knows which class to tag it with.
  for (const auto& [loc, words] : p.regions) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      auto o = detail::object_pointer(words[i]);
      if (!o) o = detail::blessed_object(words[i]);
      if (o && !ex.objects.contains(*o)) {
        errs.push_back({5, "cell " + std::to_string(i) + " of " +
                               detail::loc_id(loc) +
                               " names unexported object #" +
                               std::to_string(o->value)});
      }
    }
  }
  return errs;
}

inline std::string describe(const std::vector<CheckError>& errs) {
  std::string out;
  for (const auto& e : errs) {
    if (!out.empty()) out += "\n";
    out += "check (" + std::to_string(e.check) + "): " + e.message;
  }
  return out;
}

using TaggedMemory = std::map<target::Loc, std::vector<target::Cell>>;

/// Initial tags of all program memory. Complete programs must pass
/// check_program first; partial programs may name imported objects.
inline TaggedMemory tag_memory(const TargetProgram& p) {
  using target::Loc;
  const DeclTable& ex = p.interface.exports;
  auto class_of = [&](ObjectName o) {
    auto c = lookup_object_class(p.interface, o);
    if (!c) {
      throw LinkError("object #" + std::to_string(o.value) +
                      " is not declared by the program");
    }
    return *c;
  };

  TaggedMemory mem;
  for (const auto& [loc, words] : p.regions) {
    const ClassName comp =
        loc.kind == Loc::Kind::kObject ? class_of(loc.obj()) : loc.cls();
    std::vector<target::Cell> cells;
    cells.reserve(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
      MemTag t{std::nullopt, comp, std::nullopt, ValTag::word()};
      if (loc.kind == Loc::Kind::kMethod && i == 0) {
        t.entry = ex.classes.at(loc.cls()).methods.at(loc.second - 1);
      }
      if (auto o = detail::blessed_object(words[i])) t.bless = class_of(*o);
      if (auto o = detail::object_pointer(words[i])) {
        t.value = ValTag::obj_ptr(class_of(*o));
      } else if (loc.kind == Loc::Kind::kStack && i != 0) {
        t.value = ValTag::cleared();
      }
      cells.push_back({words[i], std::move(t)});
    }
    mem.emplace(loc, std::move(cells));
  }
  return mem;
}

/// Bootstrap code: call main on the main object, then halt.
inline std::vector<target::Word> boot_code() {
  using target::Instr;
  using target::Loc;
  using enum target::RegName;
  const target::Ptr main_obj{Loc::object(kMainObject), 0};
  return {target::encode(Instr::const_(main_obj, r_tgt)),
          target::encode(Instr::const_(main_obj, r_arg)),
          target::encode(Instr::const_(
              target::Ptr{Loc::method(kMainClass, kMainMethod), 0}, r_aux3)),
          target::encode(Instr::jal(r_aux3)), target::encode(Instr::halt())};
}

/// Checked, tagged and bootable machine state for a complete program.
inline target::TaggedMachineState boot_state(const TargetProgram& p) {
  using target::Loc;
  if (auto errs = check_program(p); !errs.empty()) {
    throw LinkError(describe(errs));
  }
  const DeclTable& ex = p.interface.exports;
  auto main_class = ex.classes.find(kMainClass);
  if (main_class == ex.classes.end() ||
      main_class->second.methods.size() < kMainMethod.value) {
    throw LinkError("program has no main method (class 0, method 1)");
  }
  auto main_obj = ex.objects.find(kMainObject);
  if (main_obj == ex.objects.end() ||
      main_obj->second.class_name != kMainClass) {
    throw LinkError("program has no main object (object 0 of class 0)");
  }
  if (main_class->second.methods[kMainMethod.value - 1].arg_class !=
      kMainClass) {
    throw LinkError("main method must take an argument of class 0");
  }

  target::TaggedMachineState s;
  s.memory = tag_memory(p);
  std::vector<target::Cell> boot;
  for (const auto& w : boot_code()) {
    MemTag t{std::nullopt, kMainClass, std::nullopt, ValTag::word()};
    if (detail::blessed_object(w)) t.bless = kMainClass;
    boot.push_back({w, t});
  }
  s.memory.emplace(Loc::boot(), std::move(boot));
  s.pc = target::Ptr{Loc::boot(), 0};
  s.pc_tag = PcTag{0};
  return s;
}

/// Result object of a halted machine: r_ret after the bootstrap's Halt, the
/// top of the current stack after a Halt inside a method.
inline std::optional<ObjectName> halted_result(
    const target::TaggedMachineState& s) {
  using enum target::RegName;
  if (s.pc.loc.kind == target::Loc::Kind::kBoot) {
    return detail::object_pointer(s.reg(r_ret).word);
  }
  const auto* sp = std::get_if<target::Ptr>(&s.reg(r_sp).word);
  if (!sp) return std::nullopt;
  const target::Cell* top = s.cell(*sp);
  if (!top) return std::nullopt;
  return detail::object_pointer(top->word);
}

}  // namespace micropol

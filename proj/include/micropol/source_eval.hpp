// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <variant>
#include <vector>

#include "micropol/source.hpp"
#include "micropol/source_typing.hpp"

namespace micropol::source {

// Continuation frames: each records the evaluation context of one hole.
struct SelectHole {
  FieldIndex field;
};
struct UpdateHoleLeft {
  FieldIndex field;
  ExprPtr value;
};
struct UpdateHoleRight {
  ObjectName target;
  FieldIndex field;
};
struct CallHoleRecv {
  MethodIndex method;
  ExprPtr argument;
};
struct CallHoleArg {
  ObjectName receiver;
  MethodIndex method;
};
struct IfEqHoleLeft {
  ExprPtr rhs;
  ExprPtr if_equal;
  ExprPtr if_different;
};
struct IfEqHoleRight {
  ObjectName lhs;
  ExprPtr if_equal;
  ExprPtr if_different;
};
struct SeqHole {
  ExprPtr second;
};
struct ExitHole {};

using ContFrame =
    std::variant<SelectHole, UpdateHoleLeft, UpdateHoleRight, CallHoleRecv,
                 CallHoleArg, IfEqHoleLeft, IfEqHoleRight, SeqHole, ExitHole>;

struct RuntimeObject {
  ClassName class_name;
  std::vector<ObjectName> fields;
};

/// Saved caller environment.
struct CallFrame {
  ObjectName this_obj;
  ObjectName arg_obj;
  std::vector<ContFrame> continuation;
};

/// The focus is either an expression still to evaluate or a value.
using Focus = std::variant<ExprPtr, ObjectName>;

struct Config {
  std::map<ObjectName, RuntimeObject> object_table;
  std::vector<CallFrame> call_stack;
  ObjectName this_obj;
  ObjectName arg_obj;
  std::vector<ContFrame> continuation;  // innermost frame at the back
  Focus focus;
};

/// Class table: everything the reduction needs besides the configuration.
struct ClassTable {
  std::map<ClassName, ClassDef> classes;
};

struct Next {};
struct Terminated {
  ObjectName result;
};
struct Stuck {
  std::string reason;
};
using StepResult = std::variant<Next, Terminated, Stuck>;

/// Initial configuration: body of the main method with object 0 as both the
/// current object and the argument.
inline Config init_config(const SourceProgram& p) {
  if (!is_complete(p.interface)) {
    throw LinkError("program is not complete: import declarations remain");
  }
  const MethodDef* main = p.find_method(kMainClass, kMainMethod);
  if (!main) throw LinkError("program has no main method (class 0, method 1)");
  auto obj = p.objects.find(kMainObject);
  if (obj == p.objects.end() || obj->second.class_name != kMainClass) {
    throw LinkError("program has no main object (object 0 of class 0)");
  }
  if (main->sig.arg_class != kMainClass) {
    throw LinkError("main method must take an argument of class 0");
  }
  Config cfg;
  for (const auto& [name, od] : p.objects) {
    cfg.object_table.emplace(name, RuntimeObject{od.class_name, od.field_values});
  }
  cfg.this_obj = kMainObject;
  cfg.arg_obj = kMainObject;
  cfg.focus = main->body;
  return cfg;
}

namespace detail {

class Stepper {
 public:
  Stepper(Config& cfg, const ClassTable& ct) : cfg_(cfg), ct_(ct) {}

  StepResult step() {
    if (auto* e = std::get_if<ExprPtr>(&cfg_.focus)) {
      ExprPtr cur = *e;
      return std::visit([&](const auto& n) { return reduce(n); }, cur->node);
    }
    return plug(std::get<ObjectName>(cfg_.focus));
  }

 private:
  void push(ContFrame f) { cfg_.continuation.push_back(std::move(f)); }
  StepResult go(ExprPtr e) {
    cfg_.focus = std::move(e);
    return Next{};
  }
  StepResult value(ObjectName o) {
    cfg_.focus = o;
    return Next{};
  }

  StepResult reduce(const This&) { return value(cfg_.this_obj); }
  StepResult reduce(const Arg&) { return value(cfg_.arg_obj); }
  StepResult reduce(const ObjRef& r) { return value(r.object); }
  StepResult reduce(const Select& s) {
    push(SelectHole{s.field});
    return go(s.target);
  }
  StepResult reduce(const Update& u) {
    push(UpdateHoleLeft{u.field, u.value});
    return go(u.target);
  }
  StepResult reduce(const Call& c) {
    push(CallHoleRecv{c.method, c.argument});
    return go(c.receiver);
  }
  StepResult reduce(const IfEq& i) {
    push(IfEqHoleLeft{i.rhs, i.if_equal, i.if_different});
    return go(i.lhs);
  }
  StepResult reduce(const Seq& s) {
    push(SeqHole{s.second});
    return go(s.first);
  }
  StepResult reduce(const Exit& x) {
    push(ExitHole{});
    return go(x.value);
  }

  RuntimeObject* object(ObjectName o) {
    auto it = cfg_.object_table.find(o);
    return it == cfg_.object_table.end() ? nullptr : &it->second;
  }

  // A value meets the innermost continuation frame.
  StepResult plug(ObjectName v) {
    if (cfg_.continuation.empty()) {
      if (cfg_.call_stack.empty()) return Terminated{v};
      CallFrame f = std::move(cfg_.call_stack.back());
      cfg_.call_stack.pop_back();
      cfg_.this_obj = f.this_obj;
      cfg_.arg_obj = f.arg_obj;
      cfg_.continuation = std::move(f.continuation);
      return value(v);
    }
    ContFrame k = std::move(cfg_.continuation.back());
    cfg_.continuation.pop_back();
    return std::visit([&](auto& h) { return fill(h, v); }, k);
  }

  StepResult fill(const SelectHole& h, ObjectName v) {
    RuntimeObject* o = object(v);
    if (!o || h.field.value < 1 || h.field.value > o->fields.size()) {
      return Stuck{"bad field selection"};
    }
    return value(o->fields[h.field.value - 1]);
  }
  StepResult fill(const UpdateHoleLeft& h, ObjectName v) {
    push(UpdateHoleRight{v, h.field});
    return go(h.value);
  }
  StepResult fill(const UpdateHoleRight& h, ObjectName v) {
    RuntimeObject* o = object(h.target);
    if (!o || h.field.value < 1 || h.field.value > o->fields.size()) {
      return Stuck{"bad field update"};
    }
    o->fields[h.field.value - 1] = v;
    return value(v);
  }
  StepResult fill(const CallHoleRecv& h, ObjectName v) {
    push(CallHoleArg{v, h.method});
    return go(h.argument);
  }
  StepResult fill(const CallHoleArg& h, ObjectName v) {
    RuntimeObject* recv = object(h.receiver);
    if (!recv) return Stuck{"call on unknown object"};
    auto cit = ct_.classes.find(recv->class_name);
    if (cit == ct_.classes.end() || h.method.value < 1 ||
        h.method.value > cit->second.methods.size()) {
      return Stuck{"call of unknown method"};
    }
    cfg_.call_stack.push_back(
        CallFrame{cfg_.this_obj, cfg_.arg_obj, std::move(cfg_.continuation)});
    cfg_.continuation.clear();
    cfg_.this_obj = h.receiver;
    cfg_.arg_obj = v;
    return go(cit->second.methods[h.method.value - 1].body);
  }
  StepResult fill(const IfEqHoleLeft& h, ObjectName v) {
    push(IfEqHoleRight{v, h.if_equal, h.if_different});
    return go(h.rhs);
  }
  StepResult fill(const IfEqHoleRight& h, ObjectName v) {
    return go(h.lhs == v ? h.if_equal : h.if_different);
  }
  StepResult fill(const SeqHole& h, ObjectName) { return go(h.second); }
  StepResult fill(const ExitHole&, ObjectName v) { return Terminated{v}; }

  Config& cfg_;
  const ClassTable& ct_;
};

}  // namespace detail

/// One deterministic reduction step; mutates `cfg` in place on Next.
inline StepResult step(Config& cfg, const ClassTable& ct) {
  return detail::Stepper(cfg, ct).step();
}

struct OutOfFuel {};
using RunResult = std::variant<Terminated, Stuck, OutOfFuel>;

struct RunStats {
  std::uint64_t steps = 0;
};

inline RunResult run_config(Config& cfg, const ClassTable& ct,
                            std::uint64_t fuel, RunStats* stats = nullptr) {
  for (std::uint64_t i = 0; i < fuel; ++i) {
    StepResult r = step(cfg, ct);
    if (stats) ++stats->steps;
    if (auto* t = std::get_if<Terminated>(&r)) return *t;
    if (auto* s = std::get_if<Stuck>(&r)) return *s;
  }
  return OutOfFuel{};
}

inline RunResult run(const SourceProgram& p, std::uint64_t fuel,
                     RunStats* stats = nullptr) {
  Config cfg = init_config(p);
  ClassTable ct{p.classes};
  return run_config(cfg, ct, fuel, stats);
}

}  // namespace micropol::source

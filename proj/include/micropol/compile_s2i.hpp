// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "micropol/interm.hpp"
#include "micropol/source.hpp"
#include "micropol/source_typing.hpp"

namespace micropol {

namespace detail {

class ExprCompiler {
 public:
  ExprCompiler(const source::SourceProgram& p, ClassName c, MethodIndex m)
      : p_(p), c_(c), m_(m) {}

  void emit(const source::ExprPtr& e, interm::ICode& out) {
    std::visit([&](const auto& n) { on(n, out); }, e->node);
  }

 private:
  using I = interm::IInstr;

  void on(const source::This&, interm::ICode& out) { out.push_back(I::this_()); }
  void on(const source::Arg&, interm::ICode& out) { out.push_back(I::arg()); }
  void on(const source::ObjRef& r, interm::ICode& out) {
    out.push_back(I::ref(r.object));
  }
  void on(const source::Select& s, interm::ICode& out) {
    emit(s.target, out);
    out.push_back(I::sel(s.field));
  }
  void on(const source::Update& u, interm::ICode& out) {
    emit(u.target, out);
    emit(u.value, out);
    out.push_back(I::upd(u.field));
  }
  void on(const source::Call& c, interm::ICode& out) {
    // Calls are resolved statically from the receiver's class.
    ClassName target = source::infer_type(p_, c_, m_, c.receiver);
    emit(c.receiver, out);
    emit(c.argument, out);
    out.push_back(I::call(target, c.method));
  }
  void on(const source::IfEq& i, interm::ICode& out) {
    interm::ICode eq, ne;
    emit(i.if_equal, eq);
    emit(i.if_different, ne);
    emit(i.lhs, out);
    emit(i.rhs, out);
    out.push_back(I::skeq(ne.size() + 1));
    out.insert(out.end(), ne.begin(), ne.end());
    out.push_back(I::skip(eq.size()));
    out.insert(out.end(), eq.begin(), eq.end());
    out.push_back(I::nop());
  }
  void on(const source::Seq& s, interm::ICode& out) {
    emit(s.first, out);
    out.push_back(I::drop());
    emit(s.second, out);
  }
  void on(const source::Exit& x, interm::ICode& out) {
    emit(x.value, out);
    out.push_back(I::halt());
  }

  const source::SourceProgram& p_;
  ClassName c_;
  MethodIndex m_;
};

}  // namespace detail

/// Stack code for `e`, typed inside method `m` of class `c`. Running it adds
/// exactly one object to the local stack, unless it diverges or halts.
inline interm::ICode compile_expr(const source::SourceProgram& p, ClassName c,
                                  MethodIndex m, const source::ExprPtr& e) {
  interm::ICode out;
  detail::ExprCompiler(p, c, m).emit(e, out);
  return out;
}

inline interm::ICode compile_method(const source::SourceProgram& p,
                                    ClassName c, MethodIndex m) {
  const source::MethodDef* md = p.find_method(c, m);
  if (!md) {
    throw TypeError("no method " + std::to_string(m.value) + " in class #" +
                    std::to_string(c.value));
  }
  interm::ICode code = compile_expr(p, c, m, md->body);
  code.push_back(interm::IInstr::ret());
  return code;
}

/// One compartment per class; objects are distributed to the compartment of
/// their class and every local stack starts empty. Partial programs are
/// accepted, so components can be compiled separately.
inline interm::IProgram compile_program(const source::SourceProgram& p) {
  interm::IProgram out;
  out.interface = p.interface;
  for (const auto& [name, cd] : p.classes) {
    interm::ICompartment comp;
    comp.class_name = name;
    comp.field_types = cd.field_types;
    for (std::size_t i = 0; i < cd.methods.size(); ++i) {
      comp.methods.push_back(
          {cd.methods[i].sig, compile_method(p, name, MethodIndex{i + 1})});
    }
    out.compartments.emplace(name, std::move(comp));
  }
  for (const auto& [name, od] : p.objects) {
    auto it = out.compartments.find(od.class_name);
    if (it == out.compartments.end()) {
      throw TypeError("object #" + std::to_string(name.value) +
                      " instantiates a class not defined by this program");
    }
    it->second.local_objects.emplace(name, od.field_values);
  }
  return out;
}

}  // namespace micropol

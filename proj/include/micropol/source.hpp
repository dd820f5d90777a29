// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <variant>
#include <vector>

#include "micropol/common.hpp"
#include "micropol/interfaces.hpp"

namespace micropol::source {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct This {};
struct Arg {};
struct ObjRef {
  ObjectName object;
};
struct Select {
  ExprPtr target;
  FieldIndex field;
};
struct Update {
  ExprPtr target;
  FieldIndex field;
  ExprPtr value;
};
struct Call {
  ExprPtr receiver;
  MethodIndex method;
  ExprPtr argument;
};
/// `lhs == rhs ? if_equal : if_different`, comparing object identities.
struct IfEq {
  ExprPtr lhs;
  ExprPtr rhs;
  ExprPtr if_equal;
  ExprPtr if_different;
};
struct Seq {
  ExprPtr first;
  ExprPtr second;
};
struct Exit {
  ExprPtr value;
};

struct Expr {
  std::variant<This, Arg, ObjRef, Select, Update, Call, IfEq, Seq, Exit> node;
};

// Builders keep test and generator code readable.
inline ExprPtr this_() { return std::make_shared<Expr>(Expr{This{}}); }
inline ExprPtr arg() { return std::make_shared<Expr>(Expr{Arg{}}); }
inline ExprPtr ref(ObjectName o) {
  return std::make_shared<Expr>(Expr{ObjRef{o}});
}
inline ExprPtr select(ExprPtr e, FieldIndex f) {
  return std::make_shared<Expr>(Expr{Select{std::move(e), f}});
}
inline ExprPtr update(ExprPtr e, FieldIndex f, ExprPtr v) {
  return std::make_shared<Expr>(Expr{Update{std::move(e), f, std::move(v)}});
}
inline ExprPtr call(ExprPtr r, MethodIndex m, ExprPtr a) {
  return std::make_shared<Expr>(Expr{Call{std::move(r), m, std::move(a)}});
}
inline ExprPtr if_eq(ExprPtr a, ExprPtr b, ExprPtr eq, ExprPtr ne) {
  return std::make_shared<Expr>(
      Expr{IfEq{std::move(a), std::move(b), std::move(eq), std::move(ne)}});
}
inline ExprPtr seq(ExprPtr a, ExprPtr b) {
  return std::make_shared<Expr>(Expr{Seq{std::move(a), std::move(b)}});
}
inline ExprPtr exit(ExprPtr e) {
  return std::make_shared<Expr>(Expr{Exit{std::move(e)}});
}

namespace detail {
template <class>
inline constexpr bool always_false = false;
}

/// Structural equality.
inline bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, This> || std::is_same_v<T, Arg>) {
          return true;
        } else if constexpr (std::is_same_v<T, ObjRef>) {
          return x.object == y.object;
        } else if constexpr (std::is_same_v<T, Select>) {
          return x.field == y.field && equal(x.target, y.target);
        } else if constexpr (std::is_same_v<T, Update>) {
          return x.field == y.field && equal(x.target, y.target) &&
                 equal(x.value, y.value);
        } else if constexpr (std::is_same_v<T, Call>) {
          return x.method == y.method && equal(x.receiver, y.receiver) &&
                 equal(x.argument, y.argument);
        } else if constexpr (std::is_same_v<T, IfEq>) {
          return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs) &&
                 equal(x.if_equal, y.if_equal) &&
                 equal(x.if_different, y.if_different);
        } else if constexpr (std::is_same_v<T, Seq>) {
          return equal(x.first, y.first) && equal(x.second, y.second);
        } else if constexpr (std::is_same_v<T, Exit>) {
          return equal(x.value, y.value);
        } else {
          static_assert(detail::always_false<T>);
        }
      },
      a->node);
}

struct MethodDef {
  MethodSig sig;
  ExprPtr body;
};

struct ClassDef {
  ClassName name;
  std::vector<ClassName> field_types;  // position i is field index i+1
  std::vector<MethodDef> methods;      // position i is method index i+1
};

struct ObjectDef {
  ObjectName name;
  ClassName class_name;
  std::vector<ObjectName> field_values;
};

struct SourceProgram {
  Interface interface;
  std::map<ClassName, ClassDef> classes;
  std::map<ObjectName, ObjectDef> objects;

  const ClassDef* find_class(ClassName c) const {
    auto it = classes.find(c);
    return it == classes.end() ? nullptr : &it->second;
  }
  const MethodDef* find_method(ClassName c, MethodIndex m) const {
    const ClassDef* cd = find_class(c);
    if (!cd || m.value < 1 || m.value > cd->methods.size()) return nullptr;
    return &cd->methods[m.value - 1];
  }
};

/// The public face of a class definition.
inline ClassDecl declaration_of(const ClassDef& c) {
  ClassDecl d{c.name, {}};
  for (const auto& m : c.methods) d.methods.push_back(m.sig);
  return d;
}

/// Source-level linking: union of definitions, interfaces linked.
inline SourceProgram link_source(const SourceProgram& a,
                                 const SourceProgram& b) {
  SourceProgram out;
  out.interface = link_interfaces(a.interface, b.interface);
  out.classes = a.classes;
  out.objects = a.objects;
  for (const auto& [n, c] : b.classes) {
    if (!out.classes.emplace(n, c).second) {
      throw LinkError("class #" + std::to_string(n.value) +
                      " defined by both programs");
    }
  }
  for (const auto& [n, o] : b.objects) {
    if (!out.objects.emplace(n, o).second) {
      throw LinkError("object #" + std::to_string(n.value) +
                      " defined by both programs");
    }
  }
  return out;
}

}  // namespace micropol::source

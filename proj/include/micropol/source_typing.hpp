// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "micropol/source.hpp"

namespace micropol::source {

/// A class, or bottom for expressions that never produce a value (`exit e`).
struct StaticType {
  std::optional<ClassName> cls;

  static StaticType bottom() { return {}; }
  static StaticType of(ClassName c) { return {c}; }
  bool is_bottom() const { return !cls.has_value(); }
  friend bool operator==(const StaticType&, const StaticType&) = default;
};

enum class TypeErrorKind {
  kUnknownName,
  kMismatch,
  kForeignField,
  kBadIndex,
  kInterface,
  kObjectDef,
};

struct TypeErrorInfo {
  TypeErrorKind kind;
  std::optional<ClassName> in_class;
  std::optional<MethodIndex> in_method;
  std::string message;
};

struct TypecheckReport {
  std::vector<TypeErrorInfo> errors;
  bool ok() const { return errors.empty(); }
};

/// Class of `o` from the program's definitions or its interface.
inline std::optional<ClassName> object_class(const SourceProgram& p,
                                             ObjectName o) {
  if (auto it = p.objects.find(o); it != p.objects.end()) {
    return it->second.class_name;
  }
  return lookup_object_class(p.interface, o);
}

/// Signature from a local definition, else from the interface.
inline std::optional<MethodSig> method_signature(const SourceProgram& p,
                                                 ClassName c, MethodIndex m) {
  if (const ClassDef* cd = p.find_class(c)) {
    if (m.value < 1 || m.value > cd->methods.size()) return std::nullopt;
    return cd->methods[m.value - 1].sig;
  }
  return lookup_signature(p.interface, c, m);
}

namespace detail {

struct TypeFailure {
  TypeErrorKind kind;
  std::string message;
};

inline std::string cls(ClassName c) { return "#" + std::to_string(c.value); }

class Inferencer {
 public:
  Inferencer(const SourceProgram& p, ClassName c, MethodSig sig)
      : p_(p), c_(c), sig_(sig) {
    main_result_ = [&]() -> std::optional<ClassName> {
      if (auto s = method_signature(p, kMainClass, kMainMethod)) {
        return s->result_class;
      }
      return std::nullopt;
    }();
  }

  StaticType infer(const ExprPtr& e) {
    return std::visit([&](const auto& n) { return on(n); }, e->node);
  }

 private:
  [[noreturn]] static void fail(TypeErrorKind k, std::string msg) {
    throw TypeFailure{k, std::move(msg)};
  }

  static void expect(StaticType got, ClassName want, const char* what) {
    if (!got.is_bottom() && *got.cls != want) {
      fail(TypeErrorKind::kMismatch, std::string(what) + ": expected " +
                                         cls(want) + ", found " +
                                         cls(*got.cls));
    }
  }

  const ClassDef& own_class() const {
    const ClassDef* cd = p_.find_class(c_);
    if (!cd) fail(TypeErrorKind::kUnknownName, "enclosing class not defined");
    return *cd;
  }

  ClassName field_type(StaticType target, FieldIndex f) {
    if (!target.is_bottom() && *target.cls != c_) {
      fail(TypeErrorKind::kForeignField,
           "field access on an object of class " + cls(*target.cls) +
               " from class " + cls(c_));
    }
    const ClassDef& cd = own_class();
    if (f.value < 1 || f.value > cd.field_types.size()) {
      fail(TypeErrorKind::kBadIndex,
           "field index " + std::to_string(f.value) + " out of range");
    }
    return cd.field_types[f.value - 1];
  }

  StaticType on(const This&) { return StaticType::of(c_); }
  StaticType on(const Arg&) { return StaticType::of(sig_.arg_class); }
  StaticType on(const ObjRef& r) {
    auto oc = object_class(p_, r.object);
    if (!oc) {
      fail(TypeErrorKind::kUnknownName,
           "unknown object #" + std::to_string(r.object.value));
    }
    return StaticType::of(*oc);
  }
  StaticType on(const Select& s) {
    return StaticType::of(field_type(infer(s.target), s.field));
  }
  StaticType on(const Update& u) {
    ClassName ft = field_type(infer(u.target), u.field);
    expect(infer(u.value), ft, "assigned value");
    return StaticType::of(ft);
  }
  StaticType on(const Call& c) {
    StaticType recv = infer(c.receiver);
    if (recv.is_bottom()) {
      fail(TypeErrorKind::kMismatch, "call receiver never yields an object");
    }
    auto sig = method_signature(p_, *recv.cls, c.method);
    if (!sig) {
      fail(TypeErrorKind::kUnknownName,
           "class " + cls(*recv.cls) + " has no method " +
               std::to_string(c.method.value));
    }
    expect(infer(c.argument), sig->arg_class, "call argument");
    return StaticType::of(sig->result_class);
  }
  StaticType on(const IfEq& i) {
    StaticType a = infer(i.lhs);
    StaticType b = infer(i.rhs);
    if (!a.is_bottom() && !b.is_bottom() && a != b) {
      fail(TypeErrorKind::kMismatch, "compared objects have classes " +
                                         cls(*a.cls) + " and " + cls(*b.cls));
    }
    StaticType t = infer(i.if_equal);
    StaticType f = infer(i.if_different);
    if (t.is_bottom()) return f;
    if (!f.is_bottom() && t != f) {
      fail(TypeErrorKind::kMismatch, "branches have classes " + cls(*t.cls) +
                                         " and " + cls(*f.cls));
    }
    return t;
  }
  StaticType on(const Seq& s) {
    infer(s.first);
    return infer(s.second);
  }
  StaticType on(const Exit& x) {
    StaticType v = infer(x.value);
    if (main_result_) expect(v, *main_result_, "exit value");
    return StaticType::bottom();
  }

  const SourceProgram& p_;
  ClassName c_;
  MethodSig sig_;
  std::optional<ClassName> main_result_;
};

}  // namespace detail

/// Static type of `e` inside method `m` of class `c`; throws TypeError when
/// `e` is ill-typed there.
inline StaticType infer_static_type(const SourceProgram& p, ClassName c,
                                    MethodIndex m, const ExprPtr& e) {
  auto sig = method_signature(p, c, m);
  if (!sig) {
    throw TypeError("no method " + std::to_string(m.value) + " in class #" +
                    std::to_string(c.value));
  }
  try {
    return detail::Inferencer(p, c, *sig).infer(e);
  } catch (const detail::TypeFailure& f) {
    throw TypeError(f.message);
  }
}

/// The class of `e`; receivers of calls always have one.
inline ClassName infer_type(const SourceProgram& p, ClassName c, MethodIndex m,
                            const ExprPtr& e) {
  StaticType t = infer_static_type(p, c, m, e);
  if (t.is_bottom()) throw TypeError("expression never yields an object");
  return *t.cls;
}

inline TypecheckReport typecheck(const SourceProgram& p) {
  TypecheckReport rep;
  auto err = [&](TypeErrorKind k, std::optional<ClassName> c,
                 std::optional<MethodIndex> m, std::string msg) {
    rep.errors.push_back({k, c, m, std::move(msg)});
  };

  for (const auto& msg : well_formedness_errors(p.interface)) {
    err(TypeErrorKind::kInterface, std::nullopt, std::nullopt, msg);
  }

  // Exports and definitions correspond one to one.
  for (const auto& [name, decl] : p.interface.exports.classes) {
    const ClassDef* cd = p.find_class(name);
    if (!cd) {
      err(TypeErrorKind::kInterface, name, std::nullopt,
          "exported class " + detail::cls(name) + " has no definition");
    } else if (!(declaration_of(*cd) == decl)) {
      err(TypeErrorKind::kInterface, name, std::nullopt,
          "export declaration of class " + detail::cls(name) +
              " does not match its definition");
    }
  }
  for (const auto& [name, cd] : p.classes) {
    if (!p.interface.exports.classes.contains(name)) {
      err(TypeErrorKind::kInterface, name, std::nullopt,
          "class " + detail::cls(name) + " is defined but not exported");
    }
  }
  for (const auto& [name, decl] : p.interface.exports.objects) {
    auto it = p.objects.find(name);
    if (it == p.objects.end()) {
      err(TypeErrorKind::kInterface, std::nullopt, std::nullopt,
          "exported object #" + std::to_string(name.value) +
              " has no definition");
    } else if (it->second.class_name != decl.class_name) {
      err(TypeErrorKind::kInterface, std::nullopt, std::nullopt,
          "object #" + std::to_string(name.value) +
              " is exported with a different class");
    }
  }

  for (const auto& [name, od] : p.objects) {
    if (!p.interface.exports.objects.contains(name)) {
      err(TypeErrorKind::kInterface, std::nullopt, std::nullopt,
          "object #" + std::to_string(name.value) +
              " is defined but not exported");
    }
    const ClassDef* cd = p.find_class(od.class_name);
    if (!cd) {
      err(TypeErrorKind::kObjectDef, od.class_name, std::nullopt,
          "object #" + std::to_string(name.value) +
              " instantiates a class not defined by this program");
      continue;
    }
    if (od.field_values.size() != cd->field_types.size()) {
      err(TypeErrorKind::kObjectDef, od.class_name, std::nullopt,
          "object #" + std::to_string(name.value) + " has " +
              std::to_string(od.field_values.size()) + " field values, class " +
              "declares " + std::to_string(cd->field_types.size()));
      continue;
    }
    for (std::size_t i = 0; i < od.field_values.size(); ++i) {
      auto vc = object_class(p, od.field_values[i]);
      if (!vc) {
        err(TypeErrorKind::kUnknownName, od.class_name, std::nullopt,
            "object #" + std::to_string(name.value) +
                " refers to unknown object #" +
                std::to_string(od.field_values[i].value));
      } else if (*vc != cd->field_types[i]) {
        err(TypeErrorKind::kMismatch, od.class_name, std::nullopt,
            "field " + std::to_string(i + 1) + " of object #" +
                std::to_string(name.value) + ": expected " +
                detail::cls(cd->field_types[i]) + ", found " +
                detail::cls(*vc));
      }
    }
  }

  for (const auto& [name, cd] : p.classes) {
    for (std::size_t i = 0; i < cd.methods.size(); ++i) {
      MethodIndex m{i + 1};
      const MethodDef& md = cd.methods[i];
      try {
        StaticType t = detail::Inferencer(p, name, md.sig).infer(md.body);
        if (!t.is_bottom() && *t.cls != md.sig.result_class) {
          err(TypeErrorKind::kMismatch, name, m,
              "method body has class " + detail::cls(*t.cls) +
                  " but the declared result is " +
                  detail::cls(md.sig.result_class));
        }
      } catch (const detail::TypeFailure& f) {
        err(f.kind, name, m, f.message);
      }
    }
  }
  return rep;
}

inline std::string describe(const TypeErrorInfo& e) {
  std::string where;
  if (e.in_class) where += "class #" + std::to_string(e.in_class->value);
  if (e.in_method) where += " method " + std::to_string(e.in_method->value);
  return where.empty() ? e.message : where + ": " + e.message;
}

}  // namespace micropol::source

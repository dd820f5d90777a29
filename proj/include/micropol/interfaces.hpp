// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "micropol/common.hpp"

namespace micropol {

struct MethodSig {
  ClassName arg_class;
  ClassName result_class;
  friend bool operator==(const MethodSig&, const MethodSig&) = default;
};

/// Public view of a class: method signatures only, fields stay private.
struct ClassDecl {
  ClassName name;
  std::vector<MethodSig> methods;  // position i is method index i+1
  friend bool operator==(const ClassDecl&, const ClassDecl&) = default;
};

struct ObjDecl {
  ObjectName name;
  ClassName class_name;
  friend bool operator==(const ObjDecl&, const ObjDecl&) = default;
};

/// Name-keyed so that tables compare independently of declaration order.
struct DeclTable {
  std::map<ClassName, ClassDecl> classes;
  std::map<ObjectName, ObjDecl> objects;

  bool empty() const { return classes.empty() && objects.empty(); }
  friend bool operator==(const DeclTable&, const DeclTable&) = default;
};

struct Interface {
  DeclTable imports;
  DeclTable exports;
  friend bool operator==(const Interface&, const Interface&) = default;
};

struct Compatibility {
  bool ok = true;
  std::vector<std::string> diagnostics;
  explicit operator bool() const { return ok; }
};

namespace detail {

inline std::string describe(const ClassDecl& d) {
  std::string s = "class #" + std::to_string(d.name.value) + " {";
  for (std::size_t i = 0; i < d.methods.size(); ++i) {
    if (i) s += ",";
    s += " #" + std::to_string(d.methods[i].result_class.value) + "(#" +
         std::to_string(d.methods[i].arg_class.value) + ")";
  }
  return s + " }";
}

inline std::string describe(const ObjDecl& d) {
  return "obj #" + std::to_string(d.name.value) + " : #" +
         std::to_string(d.class_name.value);
}

// Clause (2) for one direction: imports of `imp` against exports of `exp`.
inline void check_imports_against(const Interface& imp, const Interface& exp,
                                  Compatibility& out) {
  for (const auto& [name, decl] : imp.imports.classes) {
    auto it = exp.exports.classes.find(name);
    if (it != exp.exports.classes.end() && !(it->second == decl)) {
      out.ok = false;
      out.diagnostics.push_back("import/export mismatch for class #" +
                                std::to_string(name.value) + ": imported " +
                                describe(decl) + " vs exported " +
                                describe(it->second));
    }
  }
  for (const auto& [name, decl] : imp.imports.objects) {
    auto it = exp.exports.objects.find(name);
    if (it != exp.exports.objects.end() && !(it->second == decl)) {
      out.ok = false;
      out.diagnostics.push_back("import/export mismatch for object #" +
                                std::to_string(name.value) + ": imported " +
                                describe(decl) + " vs exported " +
                                describe(it->second));
    }
  }
}

}  // namespace detail

/// Internal well-formedness. Returns one message per violation.
///
/// Tables are maps, so name uniqueness holds by construction; what remains is
/// that exported objects instantiate exported classes and that every
/// declared object's class is itself declared somewhere in the interface.
inline std::vector<std::string> well_formedness_errors(const Interface& i) {
  std::vector<std::string> errs;
  auto declared = [&](ClassName c) {
    return i.imports.classes.contains(c) || i.exports.classes.contains(c);
  };
  for (const auto& [name, decl] : i.exports.objects) {
    if (!i.exports.classes.contains(decl.class_name)) {
      errs.push_back("exported " + detail::describe(decl) +
                     " instantiates a class that is not exported");
    }
  }
  for (const auto& [name, decl] : i.imports.objects) {
    if (!declared(decl.class_name)) {
      errs.push_back("imported " + detail::describe(decl) +
                     " has an undeclared class");
    }
  }
  for (const auto& [name, decl] : i.imports.classes) {
    if (i.exports.classes.contains(name)) {
      errs.push_back("class #" + std::to_string(name.value) +
                     " is both imported and exported");
    }
  }
  for (const auto& [name, decl] : i.imports.objects) {
    if (i.exports.objects.contains(name)) {
      errs.push_back("object #" + std::to_string(name.value) +
                     " is both imported and exported");
    }
  }
  return errs;
}

inline bool well_formed(const Interface& i) {
  return well_formedness_errors(i).empty();
}

/// Two interfaces are compatible when (1) no class or object is exported by
/// both and (2) every import naming something the other side exports is
/// syntactically equal to that export.
inline Compatibility compatible(const Interface& a, const Interface& b) {
  Compatibility out;
  for (const auto& [name, decl] : a.exports.classes) {
    if (auto it = b.exports.classes.find(name);
        it != b.exports.classes.end()) {
      out.ok = false;
      out.diagnostics.push_back("duplicate export of class #" +
                                std::to_string(name.value) + ": " +
                                detail::describe(decl) + " and " +
                                detail::describe(it->second));
    }
  }
  for (const auto& [name, decl] : a.exports.objects) {
    if (auto it = b.exports.objects.find(name);
        it != b.exports.objects.end()) {
      out.ok = false;
      out.diagnostics.push_back("duplicate export of object #" +
                                std::to_string(name.value) + ": " +
                                detail::describe(decl) + " and " +
                                detail::describe(it->second));
    }
  }
  detail::check_imports_against(a, b, out);
  detail::check_imports_against(b, a, out);
  return out;
}

/// Exports are combined; imports satisfied by the combined exports vanish.
inline Interface link_interfaces(const Interface& a, const Interface& b) {
  if (auto c = compatible(a, b); !c) {
    std::string msg = "incompatible interfaces";
    for (const auto& d : c.diagnostics) msg += "\n  " + d;
    throw LinkError(msg);
  }
  Interface out;
  out.exports = a.exports;
  out.exports.classes.insert(b.exports.classes.begin(),
                             b.exports.classes.end());
  out.exports.objects.insert(b.exports.objects.begin(),
                             b.exports.objects.end());

  auto add_imports = [&](const DeclTable& t) {
    for (const auto& [name, decl] : t.classes) {
      if (out.exports.classes.contains(name)) continue;
      auto [it, inserted] = out.imports.classes.try_emplace(name, decl);
      if (!inserted && !(it->second == decl)) {
        throw LinkError("conflicting imports of class #" +
                        std::to_string(name.value) + ": " +
                        detail::describe(it->second) + " and " +
                        detail::describe(decl));
      }
    }
    for (const auto& [name, decl] : t.objects) {
      if (out.exports.objects.contains(name)) continue;
      auto [it, inserted] = out.imports.objects.try_emplace(name, decl);
      if (!inserted && !(it->second == decl)) {
        throw LinkError("conflicting imports of object #" +
                        std::to_string(name.value) + ": " +
                        detail::describe(it->second) + " and " +
                        detail::describe(decl));
      }
    }
  };
  add_imports(a.imports);
  add_imports(b.imports);
  return out;
}

inline bool is_complete(const Interface& i) { return i.imports.empty(); }

/// Signature of method `m` of class `c`, preferring the export table.
inline std::optional<MethodSig> lookup_signature(const Interface& i,
                                                 ClassName c, MethodIndex m) {
  for (const DeclTable* t : {&i.exports, &i.imports}) {
    auto it = t->classes.find(c);
    if (it == t->classes.end()) continue;
    if (m.value < 1 || m.value > it->second.methods.size()) return std::nullopt;
    return it->second.methods[m.value - 1];
  }
  return std::nullopt;
}

/// Declared class of an object, from either table.
inline std::optional<ClassName> lookup_object_class(const Interface& i,
                                                    ObjectName o) {
  for (const DeclTable* t : {&i.exports, &i.imports}) {
    if (auto it = t->objects.find(o); it != t->objects.end()) {
      return it->second.class_name;
    }
  }
  return std::nullopt;
}

}  // namespace micropol

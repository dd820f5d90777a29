// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Java-like surface syntax. Class, object, method and field *names* are
// resolved to the numbers used by the core language: classes and objects by
// order of first occurrence in a build, methods and fields by declaration
// order within their class.
//
//   unit   := item*
//   item   := ('import'|'export') 'obj' 'decl' id (',' id)* ':' id
//           | ('import'|'export') 'class' 'decl' id '{' (sig (',' sig)*)? '}'
//           | 'obj' id ':' id '{' (id (',' id)*)? '}'
//           | 'class' id '{' (id id (',' id)* ';')* (sig '{' seq '}')* '}'
//   sig    := id id '(' id id? ')'
//   seq    := assign (';' seq)?
//   assign := 'exit' assign | cond (':=' assign)?
//   cond   := postfix ('==' postfix '?' assign ':' assign)?
//   postfix:= atom ('.' id ('(' seq ')')?)*
//   atom   := 'this' | 'arg' | id | '(' seq ')'
//
// Line comments start with `//`.

#pragma once

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "micropol/common.hpp"
#include "micropol/interfaces.hpp"
#include "micropol/source.hpp"

namespace micropol::surface {

struct Pos {
  std::string file;
  int line = 1;
  int col = 1;
  std::string str() const {
    return file + ":" + std::to_string(line) + ":" + std::to_string(col);
  }
};

[[noreturn]] inline void fail(const Pos& p, const std::string& msg) {
  throw ParseError(p.str() + ": " + msg);
}

// ---------------------------------------------------------------------------
// Lexer

enum class Tok : std::uint8_t {
  kIdent,
  kLBrace,
  kRBrace,
  kLParen,
  kRParen,
  kComma,
  kSemi,
  kColon,
  kDot,
  kAssign,
  kEqEq,
  kQuestion,
  kEnd,
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  Pos pos;
};

inline std::vector<Token> lex(const std::string& src, const std::string& file) {
  std::vector<Token> out;
  Pos p{file, 1, 1};
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++p.line;
        p.col = 1;
      } else {
        ++p.col;
      }
    }
  };
  auto ident_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t{Tok::kEnd, "", p};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '#') {
      std::size_t j = i + 1;
      while (j < src.size() && ident_char(src[j])) ++j;
      if (c == '#' && j == i + 1) fail(p, "expected a number after '#'");
      t.kind = Tok::kIdent;
      t.text = src.substr(i, j - i);
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < src.size() && src[i + 1] == b;
    };
    if (two(':', '=')) {
      t.kind = Tok::kAssign;
    } else if (two('=', '=')) {
      t.kind = Tok::kEqEq;
    } else {
      switch (c) {
        case '{': t.kind = Tok::kLBrace; break;
        case '}': t.kind = Tok::kRBrace; break;
        case '(': t.kind = Tok::kLParen; break;
        case ')': t.kind = Tok::kRParen; break;
        case ',': t.kind = Tok::kComma; break;
        case ';': t.kind = Tok::kSemi; break;
        case ':': t.kind = Tok::kColon; break;
        case '.': t.kind = Tok::kDot; break;
        case '?': t.kind = Tok::kQuestion; break;
        default:
          fail(p, std::string("unexpected character '") + c + "'");
      }
    }
    const std::size_t n =
        (t.kind == Tok::kAssign || t.kind == Tok::kEqEq) ? 2 : 1;
    t.text = src.substr(i, n);
    advance(n);
    out.push_back(std::move(t));
  }
  out.push_back(Token{Tok::kEnd, "", p});
  return out;
}

// ---------------------------------------------------------------------------
// Surface AST: names are still strings.

struct SExpr;
using SExprPtr = std::shared_ptr<const SExpr>;

struct SExpr {
  enum class Kind : std::uint8_t {
    kThis,
    kArg,
    kObject,
    kSelect,
    kUpdate,
    kCall,
    kIfEq,
    kSeq,
    kExit,
  };
  Kind kind;
  std::string name;  // object, field or method name
  std::vector<SExprPtr> kids;
  Pos pos;
};

struct SSig {
  std::string result;
  std::string name;
  std::string arg;
  std::string param;  // optional parameter name, informational only
  Pos pos;
};

struct SClassDecl {
  bool exported = false;
  std::string name;
  std::vector<SSig> methods;
  Pos pos;
};

struct SObjDecl {
  bool exported = false;
  std::vector<std::string> names;
  std::string cls;
  Pos pos;
};

struct SObjDef {
  std::string name;
  std::string cls;
  std::vector<std::string> fields;
  Pos pos;
};

struct SMethod {
  SSig sig;
  SExprPtr body;
};

struct SClassDef {
  std::string name;
  std::vector<std::pair<std::string, std::string>> fields;  // type, name
  std::vector<SMethod> methods;
  Pos pos;
};

using SItem = std::variant<SClassDecl, SObjDecl, SObjDef, SClassDef>;

struct SurfaceUnit {
  std::string file;
  std::vector<SItem> items;
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  SurfaceUnit unit(const std::string& file) {
    SurfaceUnit u{file, {}};
    while (peek().kind != Tok::kEnd) u.items.push_back(item());
    return u;
  }

  SExprPtr expression() {
    SExprPtr e = seq();
    expect(Tok::kEnd, "end of input");
    return e;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(at_ + k, toks_.size() - 1)];
  }
  Token take() {
    Token t = peek();
    if (at_ < toks_.size() - 1) ++at_;
    return t;
  }
  bool is_kw(const char* kw, std::size_t k = 0) const {
    return peek(k).kind == Tok::kIdent && peek(k).text == kw;
  }
  Token expect(Tok k, const char* what) {
    if (peek().kind != k) {
      fail(peek().pos, std::string("expected ") + what + ", found '" +
                           (peek().kind == Tok::kEnd ? "end of input"
                                                     : peek().text) +
                           "'");
    }
    return take();
  }
  void expect_kw(const char* kw) {
    if (!is_kw(kw)) {
      fail(peek().pos, std::string("expected '") + kw + "', found '" +
                           peek().text + "'");
    }
    take();
  }
  static bool reserved(const std::string& s) {
    static const std::set<std::string> kw = {"import", "export", "obj",
                                             "class",  "decl",   "this",
                                             "arg",    "exit"};
    return kw.contains(s);
  }
  std::string ident(const char* what) {
    Token t = expect(Tok::kIdent, what);
    if (reserved(t.text)) {
      fail(t.pos, std::string("expected ") + what + ", found keyword '" +
                      t.text + "'");
    }
    return t.text;
  }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    take();
    return true;
  }

  SItem item() {
    const Pos pos = peek().pos;
    if (is_kw("import") || is_kw("export")) {
      const bool exported = take().text == "export";
      if (is_kw("obj")) {
        take();
        expect_kw("decl");
        SObjDecl d{exported, {}, {}, pos};
        do {
          d.names.push_back(ident("object name"));
        } while (accept(Tok::kComma));
        expect(Tok::kColon, "':'");
        d.cls = ident("class name");
        return d;
      }
      expect_kw("class");
      expect_kw("decl");
      SClassDecl d{exported, ident("class name"), {}, pos};
      expect(Tok::kLBrace, "'{'");
      if (peek().kind != Tok::kRBrace) {
        do {
          d.methods.push_back(sig());
        } while (accept(Tok::kComma));
      }
      expect(Tok::kRBrace, "'}'");
      return d;
    }
    if (is_kw("obj")) {
      take();
      SObjDef d{ident("object name"), {}, {}, pos};
      expect(Tok::kColon, "':'");
      d.cls = ident("class name");
      expect(Tok::kLBrace, "'{'");
      if (peek().kind != Tok::kRBrace) {
        do {
          d.fields.push_back(ident("object name"));
        } while (accept(Tok::kComma));
      }
      expect(Tok::kRBrace, "'}'");
      return d;
    }
    if (is_kw("class")) {
      take();
      SClassDef d{ident("class name"), {}, {}, pos};
      expect(Tok::kLBrace, "'{'");
      while (peek().kind != Tok::kRBrace) {
        if (peek(2).kind == Tok::kLParen) {
          SMethod m{sig(), nullptr};
          expect(Tok::kLBrace, "'{'");
          m.body = seq();
          expect(Tok::kRBrace, "'}'");
          d.methods.push_back(std::move(m));
          continue;
        }
        if (!d.methods.empty()) {
          fail(peek().pos, "field declarations must precede methods");
        }
        const std::string type = ident("field type");
        do {
          d.fields.emplace_back(type, ident("field name"));
        } while (accept(Tok::kComma));
        expect(Tok::kSemi, "';'");
      }
      expect(Tok::kRBrace, "'}'");
      return d;
    }
    fail(pos, "expected a declaration or definition, found '" + peek().text +
                  "'");
  }

  SSig sig() {
    SSig s;
    s.pos = peek().pos;
    s.result = ident("result class");
    s.name = ident("method name");
    expect(Tok::kLParen, "'('");
    s.arg = ident("argument class");
    if (peek().kind == Tok::kIdent) {
      Token t = take();
      s.param = t.text;
    }
    expect(Tok::kRParen, "')'");
    return s;
  }

  static SExprPtr mk(SExpr::Kind k, Pos pos, std::vector<SExprPtr> kids = {},
                     std::string name = {}) {
    return std::make_shared<SExpr>(
        SExpr{k, std::move(name), std::move(kids), std::move(pos)});
  }

  SExprPtr seq() {
    SExprPtr a = assign();
    if (peek().kind == Tok::kSemi) {
      const Pos pos = take().pos;
      return mk(SExpr::Kind::kSeq, pos, {a, seq()});
    }
    return a;
  }

  SExprPtr assign() {
    if (is_kw("exit")) {
      const Pos pos = take().pos;
      return mk(SExpr::Kind::kExit, pos, {assign()});
    }
    SExprPtr lhs = cond();
    if (peek().kind == Tok::kAssign) {
      const Pos pos = take().pos;
      if (lhs->kind != SExpr::Kind::kSelect) {
        fail(pos, "left-hand side of ':=' must be a field selection");
      }
      return mk(SExpr::Kind::kUpdate, lhs->pos, {lhs->kids[0], assign()},
                lhs->name);
    }
    return lhs;
  }

  SExprPtr cond() {
    SExprPtr a = postfix();
    if (peek().kind != Tok::kEqEq) return a;
    const Pos pos = take().pos;
    SExprPtr b = postfix();
    expect(Tok::kQuestion, "'?'");
    SExprPtr eq = assign();
    expect(Tok::kColon, "':'");
    SExprPtr ne = assign();
    return mk(SExpr::Kind::kIfEq, pos, {a, b, eq, ne});
  }

  SExprPtr postfix() {
    SExprPtr e = atom();
    while (peek().kind == Tok::kDot) {
      take();
      const Pos pos = peek().pos;
      std::string name = ident("field or method name");
      if (accept(Tok::kLParen)) {
        SExprPtr a = seq();
        expect(Tok::kRParen, "')'");
        e = mk(SExpr::Kind::kCall, pos, {e, a}, std::move(name));
      } else {
        e = mk(SExpr::Kind::kSelect, pos, {e}, std::move(name));
      }
    }
    return e;
  }

  SExprPtr atom() {
    const Pos pos = peek().pos;
    if (is_kw("this")) {
      take();
      return mk(SExpr::Kind::kThis, pos);
    }
    if (is_kw("arg")) {
      take();
      return mk(SExpr::Kind::kArg, pos);
    }
    if (accept(Tok::kLParen)) {
      SExprPtr e = seq();
      expect(Tok::kRParen, "')'");
      return e;
    }
    return mk(SExpr::Kind::kObject, pos, {}, ident("expression"));
  }

  std::vector<Token> toks_;
  std::size_t at_ = 0;
};

inline SurfaceUnit parse_unit(const std::string& text,
                              const std::string& file = "<input>") {
  return Parser(lex(text, file)).unit(file);
}

// ---------------------------------------------------------------------------
// Elaboration

/// Everything needed to map numbers back to surface names.
struct Symbols {
  NameTable names;
  std::map<ClassName, std::vector<std::string>> method_names;
  std::map<ClassName, std::vector<std::string>> field_names;

  std::string method_name(ClassName c, MethodIndex m) const {
    auto it = method_names.find(c);
    if (it != method_names.end() && m.value >= 1 &&
        m.value <= it->second.size()) {
      return it->second[m.value - 1];
    }
    return "m" + std::to_string(m.value);
  }
  std::string field_name(ClassName c, FieldIndex f) const {
    auto it = field_names.find(c);
    if (it != field_names.end() && f.value >= 1 &&
        f.value <= it->second.size()) {
      return it->second[f.value - 1];
    }
    return "f" + std::to_string(f.value);
  }
};

/// `--entry Class.method object`: the triple that becomes class 0, method 1
/// and object 0.
struct Entry {
  std::string cls;
  std::string method;
  std::string object;
};

struct Build {
  source::SourceProgram program;   // all units linked
  std::vector<source::SourceProgram> components;  // one per unit
  Symbols symbols;
};

namespace detail {

struct ClassInfo {
  std::vector<std::string> method_names;
  std::vector<MethodSig> sigs;
  bool has_methods = false;
  std::optional<std::vector<std::string>> field_names;
  std::vector<ClassName> field_types;
};

class Elaborator {
 public:
  Elaborator(std::vector<SurfaceUnit> units, const std::optional<Entry>& entry,
             Symbols seed)
      : units_(std::move(units)), sym_(std::move(seed)) {
    if (entry) {
      sym_.names.intern_class(entry->cls);
      sym_.names.intern_object(entry->object);
      move_method_first(entry->cls, entry->method);
    }
    number();
    collect();
  }

  Build build() {
    Build b;
    for (const auto& u : units_) b.components.push_back(unit(u));
    for (const auto& c : b.components) {
      b.program = source::link_source(b.program, c);
    }
    b.symbols = sym_;
    return b;
  }

 private:
  // Puts method `m` of class `c` first in every declaration and definition.
  void move_method_first(const std::string& c, const std::string& m) {
    bool found = false;
    auto rotate = [&](auto& methods, auto name_of) {
      for (std::size_t i = 0; i < methods.size(); ++i) {
        if (name_of(methods[i]) == m) {
          std::rotate(methods.begin(), methods.begin() + i,
                      methods.begin() + i + 1);
          found = true;
          return;
        }
      }
    };
    for (auto& u : units_) {
      for (auto& it : u.items) {
        if (auto* d = std::get_if<SClassDecl>(&it); d && d->name == c) {
          rotate(d->methods, [](const SSig& s) { return s.name; });
        }
        if (auto* d = std::get_if<SClassDef>(&it); d && d->name == c) {
          rotate(d->methods, [](const SMethod& s) { return s.sig.name; });
        }
      }
    }
    if (!found) {
      throw ParseError("entry method " + c + "." + m + " is not declared");
    }
  }

  // Numbers classes and objects by first occurrence.
  void number() {
    NameTable& n = sym_.names;
    std::function<void(const SExprPtr&)> expr = [&](const SExprPtr& e) {
      if (e->kind == SExpr::Kind::kObject) n.intern_object(e->name);
      for (const auto& k : e->kids) expr(k);
    };
    auto sig = [&](const SSig& s) {
      n.intern_class(s.result);
      n.intern_class(s.arg);
    };
    for (const auto& u : units_) {
      for (const auto& it : u.items) {
        if (const auto* d = std::get_if<SClassDecl>(&it)) {
          n.intern_class(d->name);
          for (const auto& s : d->methods) sig(s);
        } else if (const auto* d = std::get_if<SObjDecl>(&it)) {
          for (const auto& o : d->names) n.intern_object(o);
          n.intern_class(d->cls);
        } else if (const auto* d = std::get_if<SObjDef>(&it)) {
          n.intern_object(d->name);
          n.intern_class(d->cls);
          for (const auto& f : d->fields) n.intern_object(f);
        } else if (const auto* d = std::get_if<SClassDef>(&it)) {
          n.intern_class(d->name);
          for (const auto& [t, f] : d->fields) n.intern_class(t);
          for (const auto& m : d->methods) {
            sig(m.sig);
            expr(m.body);
          }
        }
      }
    }
  }

  ClassName cls(const std::string& s) const { return *sym_.names.find_class(s); }
  ObjectName obj(const std::string& s) const {
    return *sym_.names.find_object(s);
  }
  MethodSig msig(const SSig& s) const {
    return MethodSig{cls(s.arg), cls(s.result)};
  }

  // Gathers method names, signatures, fields and object classes build-wide.
  void collect() {
    auto methods = [&](ClassName c, const std::vector<SSig>& sigs,
                       const Pos& pos) {
      ClassInfo& info = classes_[c];
      std::vector<std::string> names;
      std::vector<MethodSig> ms;
      std::set<std::string> seen;
      for (const auto& s : sigs) {
        if (!seen.insert(s.name).second) {
          fail(s.pos, "duplicate method '" + s.name + "'");
        }
        names.push_back(s.name);
        ms.push_back(msig(s));
      }
      if (!info.has_methods) {
        info.method_names = names;
        info.sigs = ms;
        info.has_methods = true;
      } else if (info.method_names != names || info.sigs != ms) {
        fail(pos, "class '" + sym_.names.class_name(c) +
                      "' is described inconsistently across the build");
      }
    };
    auto object = [&](ObjectName o, ClassName c, const Pos& pos) {
      auto [it, fresh] = object_class_.try_emplace(o, c);
      if (!fresh && it->second != c) {
        fail(pos, "object '" + sym_.names.object_name(o) +
                      "' is given two different classes");
      }
    };
    for (const auto& u : units_) {
      for (const auto& it : u.items) {
        if (const auto* d = std::get_if<SClassDecl>(&it)) {
          methods(cls(d->name), d->methods, d->pos);
        } else if (const auto* d = std::get_if<SObjDecl>(&it)) {
          for (const auto& o : d->names) object(obj(o), cls(d->cls), d->pos);
        } else if (const auto* d = std::get_if<SObjDef>(&it)) {
          object(obj(d->name), cls(d->cls), d->pos);
        } else if (const auto* d = std::get_if<SClassDef>(&it)) {
          std::vector<SSig> sigs;
          for (const auto& m : d->methods) sigs.push_back(m.sig);
          const ClassName c = cls(d->name);
          methods(c, sigs, d->pos);
          ClassInfo& info = classes_[c];
          if (info.field_names) {
            fail(d->pos, "class '" + d->name + "' is defined twice");
          }
          info.field_names.emplace();
          std::set<std::string> seen;
          for (const auto& [t, f] : d->fields) {
            if (!seen.insert(f).second) {
              fail(d->pos, "duplicate field '" + f + "'");
            }
            info.field_names->push_back(f);
            info.field_types.push_back(cls(t));
          }
        }
      }
    }
    for (const auto& [c, info] : classes_) {
      if (info.has_methods) sym_.method_names[c] = info.method_names;
      if (info.field_names) sym_.field_names[c] = *info.field_names;
    }
  }

  source::SourceProgram unit(const SurfaceUnit& u) {
    source::SourceProgram p;
    auto put = [](auto& table, auto key, auto value, const Pos& pos,
                  const std::string& what) {
      if (!table.emplace(key, value).second) fail(pos, "duplicate " + what);
    };
    for (const auto& it : u.items) {
      if (const auto* d = std::get_if<SClassDecl>(&it)) {
        DeclTable& t = d->exported ? p.interface.exports : p.interface.imports;
        ClassDecl cd{cls(d->name), {}};
        for (const auto& s : d->methods) cd.methods.push_back(msig(s));
        put(t.classes, cd.name, cd, d->pos,
            "declaration of class '" + d->name + "'");
      } else if (const auto* d = std::get_if<SObjDecl>(&it)) {
        DeclTable& t = d->exported ? p.interface.exports : p.interface.imports;
        for (const auto& o : d->names) {
          put(t.objects, obj(o), ObjDecl{obj(o), cls(d->cls)}, d->pos,
              "declaration of object '" + o + "'");
        }
      } else if (const auto* d = std::get_if<SObjDef>(&it)) {
        source::ObjectDef od{obj(d->name), cls(d->cls), {}};
        for (const auto& f : d->fields) od.field_values.push_back(obj(f));
        put(p.objects, od.name, od, d->pos,
            "definition of object '" + d->name + "'");
      } else if (const auto* d = std::get_if<SClassDef>(&it)) {
        const ClassName c = cls(d->name);
        source::ClassDef cd{c, classes_.at(c).field_types, {}};
        for (const auto& m : d->methods) {
          const MethodSig s = msig(m.sig);
          cd.methods.push_back({s, expr(c, s, m.body).first});
        }
        put(p.classes, c, cd, d->pos, "definition of class '" + d->name + "'");
      }
    }
    return p;
  }

  // Elaborated expression and its class; no class when it never returns.
  using Typed = std::pair<source::ExprPtr, std::optional<ClassName>>;

  Typed expr(ClassName self, const MethodSig& sig, const SExprPtr& e) {
    using K = SExpr::Kind;
    auto sub = [&](std::size_t k) { return expr(self, sig, e->kids[k]); };
    switch (e->kind) {
      case K::kThis:
        return {source::this_(), self};
      case K::kArg:
        return {source::arg(), sig.arg_class};
      case K::kObject: {
        auto o = sym_.names.find_object(e->name);
        auto it = o ? object_class_.find(*o) : object_class_.end();
        if (it == object_class_.end()) {
          fail(e->pos, "unknown object '" + e->name + "'");
        }
        return {source::ref(*o), it->second};
      }
      case K::kSelect: {
        Typed t = sub(0);
        FieldIndex f = field(self, t.second, e);
        return {source::select(t.first, f),
                classes_.at(self).field_types[f.value - 1]};
      }
      case K::kUpdate: {
        Typed t = sub(0);
        FieldIndex f = field(self, t.second, e);
        Typed v = sub(1);
        return {source::update(t.first, f, v.first),
                classes_.at(self).field_types[f.value - 1]};
      }
      case K::kCall: {
        Typed r = sub(0);
        if (!r.second) fail(e->pos, "method call on an expression that exits");
        auto ci = classes_.find(*r.second);
        if (ci == classes_.end() || !ci->second.has_methods) {
          fail(e->pos, "class '" + sym_.names.class_name(*r.second) +
                           "' has no known methods");
        }
        const auto& names = ci->second.method_names;
        auto at = std::find(names.begin(), names.end(), e->name);
        if (at == names.end()) {
          fail(e->pos, "class '" + sym_.names.class_name(*r.second) +
                           "' has no method '" + e->name + "'");
        }
        const std::size_t m = static_cast<std::size_t>(at - names.begin());
        Typed a = sub(1);
        return {source::call(r.first, MethodIndex{m + 1}, a.first),
                ci->second.sigs[m].result_class};
      }
      case K::kIfEq: {
        Typed a = sub(0), b = sub(1), x = sub(2), y = sub(3);
        return {source::if_eq(a.first, b.first, x.first, y.first),
                x.second ? x.second : y.second};
      }
      case K::kSeq: {
        Typed a = sub(0), b = sub(1);
        return {source::seq(a.first, b.first), b.second};
      }
      case K::kExit:
        return {source::exit(sub(0).first), std::nullopt};
    }
    fail(e->pos, "unknown expression");
  }

  FieldIndex field(ClassName self, std::optional<ClassName> of,
                   const SExprPtr& e) {
    if (!of || *of != self) {
      fail(e->pos, "field '" + e->name +
                       "' is only accessible on objects of the enclosing "
                       "class '" + sym_.names.class_name(self) + "'");
    }
    const auto& names = *classes_.at(self).field_names;
    auto at = std::find(names.begin(), names.end(), e->name);
    if (at == names.end()) {
      fail(e->pos, "class '" + sym_.names.class_name(self) +
                       "' has no field '" + e->name + "'");
    }
    return FieldIndex{static_cast<std::uint64_t>(at - names.begin()) + 1};
  }

  std::vector<SurfaceUnit> units_;
  Symbols sym_;
  std::map<ClassName, ClassInfo> classes_;
  std::map<ObjectName, ClassName> object_class_;
};

}  // namespace detail

/// Resolves names across all units of a build and links them.
/// Names already known to `seed` keep their numbers.
inline Build elaborate(std::vector<SurfaceUnit> units,
                       const std::optional<Entry>& entry = std::nullopt,
                       Symbols seed = {}) {
  return detail::Elaborator(std::move(units), entry, std::move(seed)).build();
}

inline Build parse_build(
    const std::vector<std::pair<std::string, std::string>>& files,
    const std::optional<Entry>& entry = std::nullopt) {
  std::vector<SurfaceUnit> units;
  for (const auto& [name, text] : files) units.push_back(parse_unit(text, name));
  return elaborate(std::move(units), entry);
}

// ---------------------------------------------------------------------------
// Printer: canonical surface text for a source program.

namespace detail {

class Printer {
 public:
  Printer(const source::SourceProgram& p, const Symbols& s) : p_(p), s_(s) {}

  std::string program() {
    std::string out;
    decls(p_.interface.imports, "import", out);
    decls(p_.interface.exports, "export", out);
    for (const auto& [o, d] : p_.objects) {
      out += "obj " + oname(o) + " : " + cname(d.class_name) + " {";
      for (std::size_t i = 0; i < d.field_values.size(); ++i) {
        out += (i ? ", " : " ") + oname(d.field_values[i]);
      }
      out += " }\n";
    }
    for (const auto& [c, d] : p_.classes) {
      out += "class " + cname(c) + " {\n";
      for (std::size_t i = 0; i < d.field_types.size(); ++i) {
        out += "  " + cname(d.field_types[i]) + " " +
               s_.field_name(c, FieldIndex{i + 1}) + ";\n";
      }
      for (std::size_t i = 0; i < d.methods.size(); ++i) {
        const auto& m = d.methods[i];
        out += "  " + sig(c, MethodIndex{i + 1}, m.sig) + " { " +
               expr(c, m.sig, m.body, 0) + " }\n";
      }
      out += "}\n";
    }
    return out;
  }

  std::string expression(ClassName self, const MethodSig& sig,
                         const source::ExprPtr& e) {
    return expr(self, sig, e, 0);
  }

 private:
  std::string cname(ClassName c) const { return s_.names.class_name(c); }
  std::string oname(ObjectName o) const { return s_.names.object_name(o); }

  std::string sig(ClassName c, MethodIndex m, const MethodSig& s) const {
    return cname(s.result_class) + " " + s_.method_name(c, m) + "(" +
           cname(s.arg_class) + ")";
  }

  void decls(const DeclTable& t, const char* kw, std::string& out) const {
    for (const auto& [c, d] : t.classes) {
      out += std::string(kw) + " class decl " + cname(c) + " {";
      for (std::size_t i = 0; i < d.methods.size(); ++i) {
        out += (i ? ", " : " ") + sig(c, MethodIndex{i + 1}, d.methods[i]);
      }
      out += " }\n";
    }
    for (const auto& [o, d] : t.objects) {
      out += std::string(kw) + " obj decl " + oname(o) + " : " +
             cname(d.class_name) + "\n";
    }
  }

  // Class of an expression, for naming methods; none when it never returns.
  std::optional<ClassName> type(ClassName self, const MethodSig& sig,
                                const source::ExprPtr& e) const {
    using namespace source;
    return std::visit(
        [&](const auto& n) -> std::optional<ClassName> {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, This>) {
            return self;
          } else if constexpr (std::is_same_v<T, Arg>) {
            return sig.arg_class;
          } else if constexpr (std::is_same_v<T, ObjRef>) {
            auto d = p_.objects.find(n.object);
            if (d != p_.objects.end()) return d->second.class_name;
            return lookup_object_class(p_.interface, n.object);
          } else if constexpr (std::is_same_v<T, Select> ||
                               std::is_same_v<T, Update>) {
            const ClassDef* cd = p_.find_class(self);
            if (!cd || n.field.value < 1 ||
                n.field.value > cd->field_types.size()) {
              return std::nullopt;
            }
            return cd->field_types[n.field.value - 1];
          } else if constexpr (std::is_same_v<T, Call>) {
            auto r = type(self, sig, n.receiver);
            if (!r) return std::nullopt;
            auto s = lookup_signature(p_.interface, *r, n.method);
            if (!s) {
              const MethodDef* md = p_.find_method(*r, n.method);
              if (!md) return std::nullopt;
              return md->sig.result_class;
            }
            return s->result_class;
          } else if constexpr (std::is_same_v<T, IfEq>) {
            auto a = type(self, sig, n.if_equal);
            return a ? a : type(self, sig, n.if_different);
          } else if constexpr (std::is_same_v<T, Seq>) {
            return type(self, sig, n.second);
          } else {
            return std::nullopt;
          }
        },
        e->node);
  }

  // Levels: 0 seq, 1 assign/exit, 2 conditional, 3 postfix/atom.
  std::string expr(ClassName self, const MethodSig& sig,
                   const source::ExprPtr& e, int need) const {
    using namespace source;
    int level = 3;
    std::string s = std::visit(
        [&](const auto& n) -> std::string {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, This>) {
            return "this";
          } else if constexpr (std::is_same_v<T, Arg>) {
            return "arg";
          } else if constexpr (std::is_same_v<T, ObjRef>) {
            return oname(n.object);
          } else if constexpr (std::is_same_v<T, Select>) {
            return expr(self, sig, n.target, 3) + "." +
                   s_.field_name(self, n.field);
          } else if constexpr (std::is_same_v<T, Update>) {
            level = 1;
            return expr(self, sig, n.target, 3) + "." +
                   s_.field_name(self, n.field) + " := " +
                   expr(self, sig, n.value, 1);
          } else if constexpr (std::is_same_v<T, Call>) {
            auto r = type(self, sig, n.receiver);
            std::string m = r ? s_.method_name(*r, n.method)
                              : "m" + std::to_string(n.method.value);
            return expr(self, sig, n.receiver, 3) + "." + m + "(" +
                   expr(self, sig, n.argument, 0) + ")";
          } else if constexpr (std::is_same_v<T, IfEq>) {
            level = 2;
            return expr(self, sig, n.lhs, 3) + " == " +
                   expr(self, sig, n.rhs, 3) + " ? " +
                   expr(self, sig, n.if_equal, 1) + " : " +
                   expr(self, sig, n.if_different, 1);
          } else if constexpr (std::is_same_v<T, Seq>) {
            level = 0;
            return expr(self, sig, n.first, 1) + "; " +
                   expr(self, sig, n.second, 0);
          } else {
            level = 1;
            return "exit " + expr(self, sig, n.value, 1);
          }
        },
        e->node);
    return level < need ? "(" + s + ")" : s;
  }

  const source::SourceProgram& p_;
  const Symbols& s_;
};

}  // namespace detail

inline std::string print_source(const source::SourceProgram& p,
                                const Symbols& s) {
  return detail::Printer(p, s).program();
}

inline std::string print_expr(const source::SourceProgram& p, const Symbols& s,
                              ClassName self, const MethodSig& sig,
                              const source::ExprPtr& e) {
  return detail::Printer(p, s).expression(self, sig, e);
}

}  // namespace micropol::surface

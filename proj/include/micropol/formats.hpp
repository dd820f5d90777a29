// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Line-based text formats for intermediate (.ic) and target (.tgt) programs,
// loaded-image dumps and execution traces. Every printed program parses
// back to an equal program.
//
// Both program formats start with optional `classes` / `objects` lines that
// fix the numbering of names, followed by interface lines:
//
//   classes Main Bool Unit
//   objects main t f tt
//   import class Unit { }
//   export class Bool { Bool(Unit), Bool(Bool) }
//   export obj t : Bool
//
// Intermediate compartments:
//
//   compartment Bool
//     fields
//     object t { }
//     stack { }
//     method 1 Bool(Unit)
//       This
//       Ref t
//       Skeq 3
//
// Target regions hold one word per line; `<word> x N` repeats a word:
//
//   region stackl Bool
//     stackl Bool+0
//     0 x 1024
//
// Words are integers, pointers `<loc>+<offset>` with <loc> one of
// `methl C m`, `objl o`, `stackl C`, `boot`, or instructions. Lines starting
// with `//` are comments.

#pragma once

#include <charconv>
#include <sstream>
#include <string>
#include <vector>

#include "micropol/compile_i2t.hpp"
#include "micropol/interm.hpp"
#include "micropol/loader.hpp"
#include "micropol/micropolicy.hpp"
#include "micropol/target.hpp"

namespace micropol::text {

namespace detail {

struct Line {
  int number = 0;
  std::vector<std::string> toks;
};

inline std::vector<Line> tokenize(const std::string& src) {
  std::vector<Line> out;
  std::istringstream in(src);
  std::string raw;
  int n = 0;
  while (std::getline(in, raw)) {
    ++n;
    if (auto c = raw.find("//"); c != std::string::npos) raw.resize(c);
    std::string spaced;
    for (char ch : raw) {
      if (ch == '{' || ch == '}' || ch == '(' || ch == ')' || ch == ',' ||
          ch == ':') {
        spaced += ' ';
        spaced += ch;
        spaced += ' ';
      } else {
        spaced += ch;
      }
    }
    std::istringstream ls(spaced);
    Line line{n, {}};
    std::string t;
    while (ls >> t) line.toks.push_back(t);
    if (!line.toks.empty()) out.push_back(std::move(line));
  }
  return out;
}

class Cursor {
 public:
  Cursor(const Line& l, const std::string& file) : l_(l), file_(file) {}

  bool done() const { return at_ >= l_.toks.size(); }
  const std::string& peek() const {
    static const std::string empty;
    return done() ? empty : l_.toks[at_];
  }
  std::string take(const char* what) {
    if (done()) fail(std::string("expected ") + what + " at end of line");
    return l_.toks[at_++];
  }
  void expect(const char* tok) {
    std::string t = take(tok);
    if (t != tok) fail(std::string("expected '") + tok + "', found '" + t + "'");
  }
  bool accept(const char* tok) {
    if (peek() != tok) return false;
    ++at_;
    return true;
  }
  void end() {
    if (!done()) fail("unexpected '" + peek() + "'");
  }
  std::uint64_t natural(const char* what) {
    std::string t = take(what);
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size()) {
      fail(std::string("expected ") + what + ", found '" + t + "'");
    }
    return v;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(file_ + ":" + std::to_string(l_.number) + ": " + msg);
  }

 private:
  const Line& l_;
  const std::string& file_;
  std::size_t at_ = 0;
};

inline bool is_integer(const std::string& t) {
  std::size_t i = (!t.empty() && t[0] == '-') ? 1 : 0;
  if (i >= t.size()) return false;
  for (; i < t.size(); ++i) {
    if (t[i] < '0' || t[i] > '9') return false;
  }
  return true;
}

inline std::string sig(const MethodSig& s, const NameTable& n) {
  return n.class_name(s.result_class) + "(" + n.class_name(s.arg_class) + ")";
}

inline MethodSig parse_sig(Cursor& c, NameTable& n) {
  MethodSig s;
  s.result_class = n.intern_class(c.take("result class"));
  c.expect("(");
  s.arg_class = n.intern_class(c.take("argument class"));
  c.expect(")");
  return s;
}

inline std::string header(const NameTable& n) {
  std::string out;
  if (n.class_count()) {
    out += "classes";
    for (std::uint64_t i = 0; i < n.class_count(); ++i) {
      out += " " + n.class_name(ClassName{i});
    }
    out += "\n";
  }
  if (n.object_count()) {
    out += "objects";
    for (std::uint64_t i = 0; i < n.object_count(); ++i) {
      out += " " + n.object_name(ObjectName{i});
    }
    out += "\n";
  }
  return out;
}

inline std::string interface(const Interface& i, const NameTable& n) {
  std::string out;
  auto table = [&](const DeclTable& t, const char* kw) {
    for (const auto& [c, d] : t.classes) {
      out += std::string(kw) + " class " + n.class_name(c) + " {";
      for (std::size_t k = 0; k < d.methods.size(); ++k) {
        out += (k ? ", " : " ") + sig(d.methods[k], n);
      }
      out += " }\n";
    }
    for (const auto& [o, d] : t.objects) {
      out += std::string(kw) + " obj " + n.object_name(o) + " : " +
             n.class_name(d.class_name) + "\n";
    }
  };
  table(i.imports, "import");
  table(i.exports, "export");
  return out;
}

// Handles `classes`, `objects`, `import` and `export` lines.
inline bool parse_common(Cursor& c, Interface& iface, NameTable& n) {
  if (c.accept("classes")) {
    while (!c.done()) n.intern_class(c.take("class name"));
    return true;
  }
  if (c.accept("objects")) {
    while (!c.done()) n.intern_object(c.take("object name"));
    return true;
  }
  const bool imp = c.peek() == "import";
  if (!imp && c.peek() != "export") return false;
  c.take("import or export");
  DeclTable& t = imp ? iface.imports : iface.exports;
  if (c.accept("class")) {
    ClassDecl d{n.intern_class(c.take("class name")), {}};
    c.expect("{");
    if (!c.accept("}")) {
      do {
        d.methods.push_back(parse_sig(c, n));
      } while (c.accept(","));
      c.expect("}");
    }
    c.end();
    if (!t.classes.emplace(d.name, d).second) c.fail("duplicate declaration");
    return true;
  }
  c.expect("obj");
  ObjDecl d{n.intern_object(c.take("object name")), {}};
  c.expect(":");
  d.class_name = n.intern_class(c.take("class name"));
  c.end();
  if (!t.objects.emplace(d.name, d).second) c.fail("duplicate declaration");
  return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Intermediate programs

inline std::string print(const interm::IInstr& i, const NameTable& n) {
  using interm::Op;
  switch (i.op) {
    case Op::kNop: return "Nop";
    case Op::kThis: return "This";
    case Op::kArg: return "Arg";
    case Op::kRef: return "Ref " + n.object_name(i.object);
    case Op::kSel: return "Sel " + std::to_string(i.index);
    case Op::kUpd: return "Upd " + std::to_string(i.index);
    case Op::kCall:
      return "Call " + n.class_name(i.cls) + " " + std::to_string(i.index);
    case Op::kRet: return "Ret";
    case Op::kSkip: return "Skip " + std::to_string(i.index);
    case Op::kSkeq: return "Skeq " + std::to_string(i.index);
    case Op::kDrop: return "Drop";
    case Op::kHalt: return "Halt";
  }
  return "?";
}

inline std::string print(const interm::IProgram& p, const NameTable& n) {
  std::string out = detail::header(n) + detail::interface(p.interface, n);
  auto objects = [&](const std::vector<ObjectName>& os) {
    std::string s = "{";
    for (std::size_t k = 0; k < os.size(); ++k) {
      s += (k ? ", " : " ") + n.object_name(os[k]);
    }
    return s + " }";
  };
  for (const auto& [c, comp] : p.compartments) {
    out += "compartment " + n.class_name(c) + "\n  fields";
    for (ClassName f : comp.field_types) out += " " + n.class_name(f);
    out += "\n";
    for (const auto& [o, fields] : comp.local_objects) {
      out += "  object " + n.object_name(o) + " " + objects(fields) + "\n";
    }
    out += "  stack " + objects(comp.local_stack) + "\n";
    for (std::size_t m = 0; m < comp.methods.size(); ++m) {
      out += "  method " + std::to_string(m + 1) + " " +
             detail::sig(comp.methods[m].sig, n) + "\n";
      for (const auto& i : comp.methods[m].code) {
        out += "    " + print(i, n) + "\n";
      }
    }
  }
  return out;
}

inline interm::IProgram parse_interm(const std::string& src, NameTable& n,
                                     const std::string& file = "<input>") {
  using interm::IInstr;
  interm::IProgram p;
  interm::ICompartment* comp = nullptr;
  interm::IMethod* method = nullptr;
  auto objects = [&](detail::Cursor& c) {
    std::vector<ObjectName> os;
    c.expect("{");
    if (!c.accept("}")) {
      do {
        os.push_back(n.intern_object(c.take("object name")));
      } while (c.accept(","));
      c.expect("}");
    }
    c.end();
    return os;
  };
  const auto lines = detail::tokenize(src);
  for (const auto& line : lines) {
    detail::Cursor c(line, file);
    const std::string head = c.peek();
    if (head == "compartment") {
      c.take("compartment");
      ClassName cls = n.intern_class(c.take("class name"));
      c.end();
      auto [it, fresh] = p.compartments.try_emplace(cls);
      if (!fresh) c.fail("duplicate compartment");
      comp = &it->second;
      comp->class_name = cls;
      method = nullptr;
      continue;
    }
    if (!comp) {
      if (!detail::parse_common(c, p.interface, n)) {
        c.fail("unexpected '" + head + "' outside a compartment");
      }
      continue;
    }
    if (head == "fields") {
      c.take("fields");
      while (!c.done()) comp->field_types.push_back(n.intern_class(c.take("")));
      method = nullptr;
    } else if (head == "object") {
      c.take("object");
      ObjectName o = n.intern_object(c.take("object name"));
      if (!comp->local_objects.emplace(o, objects(c)).second) {
        c.fail("duplicate object");
      }
      method = nullptr;
    } else if (head == "stack") {
      c.take("stack");
      comp->local_stack = objects(c);
      method = nullptr;
    } else if (head == "method") {
      c.take("method");
      if (c.natural("method index") != comp->methods.size() + 1) {
        c.fail("methods must be numbered consecutively from 1");
      }
      MethodSig s = detail::parse_sig(c, n);
      c.end();
      comp->methods.push_back({s, {}});
      method = &comp->methods.back();
    } else {
      if (!method) c.fail("instruction outside a method");
      const std::string op = c.take("instruction");
      IInstr i;
      if (op == "Nop") i = IInstr::nop();
      else if (op == "This") i = IInstr::this_();
      else if (op == "Arg") i = IInstr::arg();
      else if (op == "Ref") i = IInstr::ref(n.intern_object(c.take("object")));
      else if (op == "Sel") i = IInstr::sel(FieldIndex{c.natural("field")});
      else if (op == "Upd") i = IInstr::upd(FieldIndex{c.natural("field")});
      else if (op == "Call") {
        ClassName cls = n.intern_class(c.take("class"));
        i = IInstr::call(cls, MethodIndex{c.natural("method")});
      } else if (op == "Ret") i = IInstr::ret();
      else if (op == "Skip") i = IInstr::skip(c.natural("count"));
      else if (op == "Skeq") i = IInstr::skeq(c.natural("count"));
      else if (op == "Drop") i = IInstr::drop();
      else if (op == "Halt") i = IInstr::halt();
      else c.fail("unknown instruction '" + op + "'");
      c.end();
      method->code.push_back(i);
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Target programs

inline std::string print(const target::Loc& l, const NameTable& n) {
  using K = target::Loc::Kind;
  switch (l.kind) {
    case K::kMethod:
      return "methl " + n.class_name(l.cls()) + " " + std::to_string(l.second);
    case K::kObject:
      return "objl " + n.object_name(l.obj());
    case K::kStack:
      return "stackl " + n.class_name(l.cls());
    case K::kBoot:
      return "boot";
  }
  return "?";
}

inline std::string print(const target::Ptr& p, const NameTable& n) {
  std::string off = p.offset.str();
  return print(p.loc, n) + (p.offset < 0 ? off : "+" + off);
}

inline std::string print(const target::Imm& i, const NameTable& n) {
  if (const auto* v = std::get_if<target::Integer>(&i)) return v->str();
  return print(std::get<target::Ptr>(i), n);
}

inline std::string print(const target::Instr& i, const NameTable& n) {
  using target::Opcode;
  using target::to_string;
  switch (i.op) {
    case Opcode::kNop:
      return "Nop";
    case Opcode::kConst:
      return "Const " + print(i.imm, n) + " " + to_string(i.r1);
    case Opcode::kMov:
      return std::string("Mov ") + to_string(i.r1) + " " + to_string(i.r2);
    case Opcode::kBinop: {
      const char* op = i.alu == target::BinOp::kAdd   ? "Add "
                       : i.alu == target::BinOp::kSub ? "Sub "
                                                      : "Eq ";
      return std::string(op) + to_string(i.r1) + " " + to_string(i.r2) + " " +
             to_string(i.r3);
    }
    case Opcode::kLoad:
      return std::string("Load ") + to_string(i.r1) + " " + to_string(i.r2);
    case Opcode::kStore:
      return std::string("Store ") + to_string(i.r1) + " " + to_string(i.r2);
    case Opcode::kJump:
      return std::string("Jump ") + to_string(i.r1);
    case Opcode::kJal:
      return std::string("Jal ") + to_string(i.r1);
    case Opcode::kBnz:
      return std::string("Bnz ") + to_string(i.r1) + " " + print(i.imm, n);
    case Opcode::kHalt:
      return "Halt";
  }
  return "?";
}

inline std::string print(const target::Word& w, const NameTable& n) {
  if (const auto* v = std::get_if<target::Integer>(&w)) return v->str();
  if (const auto* p = std::get_if<target::Ptr>(&w)) return print(*p, n);
  return print(std::get<target::Encoded>(w).instr, n);
}

namespace detail {

inline target::RegName parse_reg(Cursor& c) {
  const std::string t = c.take("register");
  for (target::RegName r : target::kAllRegisters) {
    if (t == target::to_string(r)) return r;
  }
  c.fail("unknown register '" + t + "'");
}

inline target::Integer parse_integer(Cursor& c, const std::string& t) {
  if (!is_integer(t)) c.fail("expected an integer, found '" + t + "'");
  return target::Integer(t);
}

// `<name>+<offset>` or `<name>-<offset>`; name is empty for boot.
inline std::pair<std::string, target::Integer> split_offset(
    Cursor& c, const std::string& t) {
  std::size_t k = t.find_last_of("+-");
  if (k == std::string::npos) c.fail("expected '+offset' in '" + t + "'");
  std::string off = t.substr(k + (t[k] == '+' ? 1 : 0));
  return {t.substr(0, k), parse_integer(c, off)};
}

inline target::Ptr parse_ptr(Cursor& c, NameTable& n) {
  using target::Loc;
  const std::string kind = c.take("location");
  if (kind.rfind("boot", 0) == 0) {
    auto [name, off] = split_offset(c, kind);
    if (name != "boot") c.fail("bad location '" + kind + "'");
    return {Loc::boot(), off};
  }
  if (kind == "methl") {
    ClassName cls = n.intern_class(c.take("class"));
    auto [m, off] = split_offset(c, c.take("method index"));
    if (!is_integer(m) || m[0] == '-') c.fail("bad method index '" + m + "'");
    return {Loc::method(cls, MethodIndex{std::stoull(m)}), off};
  }
  auto [name, off] = split_offset(c, c.take("name"));
  if (kind == "objl") return {Loc::object(n.intern_object(name)), off};
  if (kind == "stackl") return {Loc::stack(n.intern_class(name)), off};
  c.fail("unknown location kind '" + kind + "'");
}

inline bool is_location(const std::string& t) {
  return t == "methl" || t == "objl" || t == "stackl" || t.rfind("boot", 0) == 0;
}

inline target::Imm parse_imm(Cursor& c, NameTable& n) {
  if (is_location(c.peek())) return parse_ptr(c, n);
  return parse_integer(c, c.take("immediate"));
}

inline target::Word parse_word(Cursor& c, NameTable& n) {
  using target::Instr;
  const std::string t = c.peek();
  if (is_location(t)) return parse_ptr(c, n);
  if (is_integer(t)) return parse_integer(c, c.take("integer"));
  c.take("instruction");
  Instr i;
  if (t == "Nop") {
    i = Instr::nop();
  } else if (t == "Const") {
    target::Imm imm = parse_imm(c, n);
    i = Instr::const_(imm, parse_reg(c));
  } else if (t == "Mov") {
    auto a = parse_reg(c);
    i = Instr::mov(a, parse_reg(c));
  } else if (t == "Add" || t == "Sub" || t == "Eq") {
    auto a = parse_reg(c);
    auto b = parse_reg(c);
    auto d = parse_reg(c);
    i = Instr::binop(t == "Add"   ? target::BinOp::kAdd
                     : t == "Sub" ? target::BinOp::kSub
                                  : target::BinOp::kEq,
                     a, b, d);
  } else if (t == "Load") {
    auto a = parse_reg(c);
    i = Instr::load(a, parse_reg(c));
  } else if (t == "Store") {
    auto a = parse_reg(c);
    i = Instr::store(a, parse_reg(c));
  } else if (t == "Jump") {
    i = Instr::jump(parse_reg(c));
  } else if (t == "Jal") {
    i = Instr::jal(parse_reg(c));
  } else if (t == "Bnz") {
    auto r = parse_reg(c);
    i = Instr::bnz(r, parse_imm(c, n));
  } else if (t == "Halt") {
    i = Instr::halt();
  } else {
    c.fail("unknown word '" + t + "'");
  }
  return target::encode(i);
}

}  // namespace detail

inline std::string print(const TargetProgram& p, const NameTable& n) {
  std::string out = detail::header(n) + detail::interface(p.interface, n);
  for (const auto& [loc, words] : p.regions) {
    out += "region " + print(loc, n) + "\n";
    for (std::size_t k = 0; k < words.size();) {
      std::size_t run = 1;
      while (k + run < words.size() && words[k + run] == words[k]) ++run;
      out += "  " + print(words[k], n);
      if (run > 1) out += " x " + std::to_string(run);
      out += "\n";
      k += run;
    }
  }
  return out;
}

inline TargetProgram parse_target(const std::string& src, NameTable& n,
                                  const std::string& file = "<input>") {
  TargetProgram p;
  std::vector<target::Word>* region = nullptr;
  const auto lines = detail::tokenize(src);
  for (const auto& line : lines) {
    detail::Cursor c(line, file);
    if (c.peek() == "region") {
      c.take("region");
      // Region names are pointers without an offset.
      std::string kind = c.take("location");
      target::Loc loc;
      if (kind == "boot") {
        c.fail("programs may not define the boot region");
      } else if (kind == "methl") {
        ClassName cls = n.intern_class(c.take("class"));
        loc = target::Loc::method(cls, MethodIndex{c.natural("method index")});
      } else if (kind == "objl") {
        loc = target::Loc::object(n.intern_object(c.take("object")));
      } else if (kind == "stackl") {
        loc = target::Loc::stack(n.intern_class(c.take("class")));
      } else {
        c.fail("unknown location kind '" + kind + "'");
      }
      c.end();
      auto [it, fresh] = p.regions.try_emplace(loc);
      if (!fresh) c.fail("duplicate region");
      region = &it->second;
      continue;
    }
    if (!region) {
      if (!detail::parse_common(c, p.interface, n)) {
        c.fail("unexpected '" + c.peek() + "' outside a region");
      }
      continue;
    }
    target::Word w = detail::parse_word(c, n);
    std::uint64_t times = 1;
    if (c.accept("x")) times = c.natural("repeat count");
    c.end();
    region->insert(region->end(), times, w);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Loaded images and traces

inline std::string print(const ValTag& t, const NameTable& n) {
  return to_string(t, n);
}

inline std::string print(const MemTag& t, const NameTable& n) {
  return to_string(t, n);
}

/// `region <loc>` then `<index>: <word> @ <tag>` lines; runs of identical
/// cells are written `<first>..<last>: <word> @ <tag>`.
inline std::string dump_image(
    const std::map<target::Loc, std::vector<target::Cell>>& mem,
    const NameTable& n) {
  std::string out;
  for (const auto& [loc, cells] : mem) {
    out += "region " + print(loc, n) + "\n";
    for (std::size_t k = 0; k < cells.size();) {
      std::size_t run = 1;
      while (k + run < cells.size() && cells[k + run].word == cells[k].word &&
             cells[k + run].tag == cells[k].tag) {
        ++run;
      }
      out += "  " + std::to_string(k);
      if (run > 1) out += ".." + std::to_string(k + run - 1);
      out += ": " + print(cells[k].word, n) + " @ " + print(cells[k].tag, n) +
             "\n";
      k += run;
    }
  }
  return out;
}

inline std::string dump_registers(const target::TaggedMachineState& s,
                                  const NameTable& n) {
  std::string out;
  for (target::RegName r : target::kAllRegisters) {
    out += std::string(target::to_string(r)) + " = " +
           print(s.reg(r).word, n) + " @ " + print(s.reg(r).tag, n) + "\n";
  }
  return out;
}

/// One trace line: step number, pc, instruction, pc tag transition, rule,
/// and the tags of the registers the step wrote.
inline std::string trace_line(std::uint64_t step,
                              const target::TaggedMachineState& after,
                              const target::StepRecord& rec,
                              const target::StepResult& result,
                              const NameTable& n) {
  std::string out = std::to_string(step) + " " + print(rec.pc, n) + " | ";
  out += rec.instr ? print(*rec.instr, n) : std::string("<undecodable>");
  out += " | depth " + to_string(rec.pc_tag_before) + "->" +
         to_string(rec.pc_tag_after);
  if (const auto* f = std::get_if<target::Failstop>(&result)) {
    return out + " | failstop " + target::to_string(*f);
  }
  out += std::string(" | ") + policy::rule_name(rec.rule);
  if (rec.instr) {
    const target::Instr& i = *rec.instr;
    auto show = [&](target::RegName r) {
      out += std::string(" ") + target::to_string(r) + "@" +
             print(after.reg(r).tag, n);
    };
    switch (i.op) {
      case target::Opcode::kConst:
        show(i.r1);
        break;
      case target::Opcode::kMov:
      case target::Opcode::kLoad:
        show(i.r2);
        break;
      case target::Opcode::kBinop:
        show(i.r3);
        break;
      case target::Opcode::kJal:
        show(target::RegName::r_a);
        break;
      default:
        break;
    }
  }
  if (std::holds_alternative<target::Halted>(result)) out += " | halted";
  return out;
}

}  // namespace micropol::text

// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Mutual-distrust test harness: differential runs across the three levels,
// the linear-capability invariant, a catalog of low-level attacks that must
// fail-stop, and a generator of random well-typed programs.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "micropol/compile_i2t.hpp"
#include "micropol/compile_s2i.hpp"
#include "micropol/formats.hpp"
#include "micropol/interm.hpp"
#include "micropol/library.hpp"
#include "micropol/loader.hpp"
#include "micropol/micropolicy.hpp"
#include "micropol/source_eval.hpp"
#include "micropol/source_typing.hpp"
#include "micropol/syntax.hpp"
#include "micropol/target.hpp"

namespace micropol::harness {

// ---------------------------------------------------------------------------
// Observables

struct Observable {
  enum class Kind : std::uint8_t {
    kTerminated,
    kFailstop,
    kOutOfFuel,
    kResourceExhaustion,
  };
  Kind kind = Kind::kOutOfFuel;
  ObjectName result{};  // for kTerminated
  std::string reason;   // for kFailstop

  static Observable terminated(ObjectName o) {
    return {Kind::kTerminated, o, {}};
  }
  static Observable failstop(std::string why) {
    return {Kind::kFailstop, {}, std::move(why)};
  }
  static Observable out_of_fuel() { return {Kind::kOutOfFuel, {}, {}}; }
  static Observable exhausted() { return {Kind::kResourceExhaustion, {}, {}}; }
};

/// Termination is observable with its result; fail-stops are observable but
/// their reasons are level specific and not compared.
inline bool same_observable(const Observable& a, const Observable& b) {
  if (a.kind != b.kind) return false;
  return a.kind != Observable::Kind::kTerminated || a.result == b.result;
}

inline std::string describe(const Observable& o, const NameTable& n) {
  switch (o.kind) {
    case Observable::Kind::kTerminated:
      return "Terminated " + n.object_name(o.result);
    case Observable::Kind::kFailstop:
      return "Failstop " + o.reason;
    case Observable::Kind::kOutOfFuel:
      return "OutOfFuel";
    case Observable::Kind::kResourceExhaustion:
      return "Failstop resource-exhaustion";
  }
  return "?";
}

inline Observable observe_source(const source::SourceProgram& p,
                                 std::uint64_t fuel,
                                 std::uint64_t* steps = nullptr) {
  source::RunStats stats;
  source::RunResult r = source::run(p, fuel, &stats);
  if (steps) *steps = stats.steps;
  if (auto* t = std::get_if<source::Terminated>(&r)) {
    return Observable::terminated(t->result);
  }
  if (auto* s = std::get_if<source::Stuck>(&r)) {
    return Observable::failstop(s->reason);
  }
  return Observable::out_of_fuel();
}

inline Observable observe_interm(const interm::IProgram& p, std::uint64_t fuel,
                                 std::uint64_t* steps = nullptr) {
  interm::IState s = interm::iload(p);
  interm::RunStats stats;
  interm::RunResult r = interm::irun(s, fuel, &stats);
  if (steps) *steps = stats.steps;
  if (auto* t = std::get_if<interm::Terminated>(&r)) {
    return Observable::terminated(t->result);
  }
  if (auto* f = std::get_if<interm::Failstop>(&r)) {
    return Observable::failstop(f->reason);
  }
  return Observable::out_of_fuel();
}

// ---------------------------------------------------------------------------
// Linear return capabilities

/// Checks that no return capability is duplicated. With `compiled`, also
/// checks that every outstanding call depth below the current one holds
/// exactly one capability, as compiled code never discards one.
inline std::optional<std::string> scan_linearity(
    const target::TaggedMachineState& s, bool compiled = false) {
  std::map<std::uint64_t, std::vector<std::string>> where;
  for (target::RegName r : target::kAllRegisters) {
    const ValTag& t = s.reg(r).tag;
    if (t.is_ret_cap()) where[t.depth()].push_back(target::to_string(r));
  }
  for (const auto& [loc, cells] : s.memory) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const ValTag& t = cells[i].tag.value;
      if (t.is_ret_cap()) {
        where[t.depth()].push_back(micropol::detail::loc_id(loc) + "[" +
                                   std::to_string(i) + "]");
      }
    }
  }
  for (const auto& [k, locs] : where) {
    if (locs.size() > 1) {
      std::string msg = "capability for depth " + std::to_string(k) +
                        " duplicated:";
      for (const auto& l : locs) msg += " " + l;
      return msg;
    }
  }
  if (compiled) {
    for (std::uint64_t k = 0; k < s.pc_tag.depth; ++k) {
      if (!where.contains(k)) {
        return "no capability for outstanding depth " + std::to_string(k);
      }
    }
    for (const auto& [k, locs] : where) {
      if (k >= s.pc_tag.depth) {
        return "capability for depth " + std::to_string(k) +
               " outlives its call (current depth " +
               std::to_string(s.pc_tag.depth) + ")";
      }
    }
  }
  return std::nullopt;
}

/// Incremental equivalent of scan_linearity: only registers and the cell a
/// step accessed can change tags, so only they are re-examined.
class LinearityTracker {
 public:
  explicit LinearityTracker(const target::TaggedMachineState& s) {
    for (const auto& [loc, cells] : s.memory) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].tag.value.is_ret_cap()) {
          mem_[{loc, i}] = cells[i].tag.value.depth();
        }
      }
    }
  }

  std::optional<std::string> update(const target::TaggedMachineState& s,
                                    const target::StepRecord& rec,
                                    bool compiled) {
    if (rec.accessed) {
      const target::Cell* c = s.cell(*rec.accessed);
      const auto key = std::make_pair(rec.accessed->loc,
                                      static_cast<std::size_t>(
                                          rec.accessed->offset));
      if (c && c->tag.value.is_ret_cap()) {
        mem_[key] = c->tag.value.depth();
      } else {
        mem_.erase(key);
      }
    }
    std::map<std::uint64_t, int> count;
    for (const auto& [key, k] : mem_) ++count[k];
    for (target::RegName r : target::kAllRegisters) {
      const ValTag& t = s.reg(r).tag;
      if (t.is_ret_cap()) ++count[t.depth()];
    }
    for (const auto& [k, n] : count) {
      if (n > 1) {
        return "capability for depth " + std::to_string(k) + " duplicated";
      }
      if (compiled && k >= s.pc_tag.depth) {
        return "capability for depth " + std::to_string(k) +
               " outlives its call";
      }
    }
    if (compiled) {
      for (std::uint64_t k = 0; k < s.pc_tag.depth; ++k) {
        if (!count.contains(k)) {
          return "no capability for outstanding depth " + std::to_string(k);
        }
      }
    }
    return std::nullopt;
  }

 private:
  std::map<std::pair<target::Loc, std::size_t>, std::uint64_t> mem_;
};

enum class LinearityCheck : std::uint8_t {
  kNone,
  kIncremental,  // LinearityTracker after every step
  kFullScan,     // scan_linearity after every step
};

struct TargetRun {
  Observable observable;
  std::uint64_t steps = 0;
  std::optional<target::Failstop> failstop;
  std::optional<std::string> linearity_violation;
};

/// Boots and runs a linked target program under `policy`.
template <class Policy>
TargetRun observe_target(const TargetProgram& p, const Policy& policy,
                         std::uint64_t fuel,
                         LinearityCheck check = LinearityCheck::kNone,
                         bool compiled = true) {
  TargetRun out;
  target::TaggedMachineState s = boot_state(p);
  std::optional<LinearityTracker> tracker;
  if (check == LinearityCheck::kIncremental) tracker.emplace(s);
  if (check != LinearityCheck::kNone) {
    out.linearity_violation = scan_linearity(s, compiled);
  }
  auto observer = [&](const target::TaggedMachineState& st,
                      const target::StepRecord& rec,
                      const target::StepResult&) {
    ++out.steps;
    if (out.linearity_violation) return;
    if (check == LinearityCheck::kFullScan) {
      out.linearity_violation = scan_linearity(st, compiled);
    } else if (tracker) {
      out.linearity_violation = tracker->update(st, rec, compiled);
    }
  };
  target::RunResult r = target::run(s, policy, fuel, observer);
  if (std::holds_alternative<target::Halted>(r)) {
    auto o = halted_result(s);
    out.observable = o ? Observable::terminated(*o)
                       : Observable::failstop("halted without an object");
  } else if (auto* f = std::get_if<target::Failstop>(&r)) {
    out.failstop = *f;
    out.observable = f->kind == target::FailKind::kResourceExhaustion
                         ? Observable::exhausted()
                         : Observable::failstop(target::to_string(*f));
  } else {
    out.observable = Observable::out_of_fuel();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Differential testing

/// Step budgets per level for a source budget F. Compiled code takes more
/// steps than the code it comes from; a level that runs out of fuel while the
/// others agree is retried once with kRetryFactor times its budget.
inline constexpr std::uint64_t kIntermFuelFactor = 4;
inline constexpr std::uint64_t kTargetFuelFactor = 100;
inline constexpr std::uint64_t kRetryFactor = 16;

struct DiffReport {
  Observable src, ic, tgt;
  std::uint64_t src_steps = 0, ic_steps = 0, tgt_steps = 0;
  bool agree = false;
  bool excluded = false;  // target ran out of stack: not compared
  std::optional<std::string> linearity_violation;
  std::optional<target::Failstop> tgt_failstop;

  std::string describe(const NameTable& n) const {
    return "src: " + harness::describe(src, n) +
           ", ic: " + harness::describe(ic, n) +
           ", tgt: " + harness::describe(tgt, n) +
           (excluded ? " (excluded: resource exhaustion)" : "") +
           (linearity_violation ? " linearity: " + *linearity_violation : "");
  }
};

/// Runs a complete program at the three levels and compares what they
/// observe. `policy` accumulates rule coverage across runs.
inline DiffReport run_differential(
    const source::SourceProgram& p, std::uint64_t fuel,
    const policy::MicroPolicy& policy = policy::MicroPolicy{},
    LinearityCheck check = LinearityCheck::kIncremental,
    std::size_t stack_capacity = kDefaultStackCapacity) {
  const interm::IProgram ip = compile_program(p);
  const TargetProgram tp = compile_to_target(ip, stack_capacity);

  DiffReport r;
  auto run_src = [&](std::uint64_t f) {
    r.src = observe_source(p, f, &r.src_steps);
  };
  auto run_ic = [&](std::uint64_t f) { r.ic = observe_interm(ip, f, &r.ic_steps); };
  auto run_tgt = [&](std::uint64_t f) {
    TargetRun t = observe_target(tp, policy, f, check, true);
    r.tgt = t.observable;
    r.tgt_steps = t.steps;
    r.tgt_failstop = t.failstop;
    if (t.linearity_violation) r.linearity_violation = t.linearity_violation;
  };
  run_src(fuel);
  run_ic(fuel * kIntermFuelFactor);
  run_tgt(fuel * kTargetFuelFactor);

  auto compare = [&] {
    if (r.tgt.kind == Observable::Kind::kResourceExhaustion) {
      r.excluded = true;
      return same_observable(r.src, r.ic);
    }
    return same_observable(r.src, r.ic) && same_observable(r.ic, r.tgt);
  };
  r.agree = compare();
  if (!r.agree) {
    using K = Observable::Kind;
    if (r.src.kind == K::kOutOfFuel) run_src(fuel * kRetryFactor);
    if (r.ic.kind == K::kOutOfFuel) {
      run_ic(fuel * kIntermFuelFactor * kRetryFactor);
    }
    if (r.tgt.kind == K::kOutOfFuel) {
      run_tgt(fuel * kTargetFuelFactor * kRetryFactor);
    }
    r.agree = compare();
  }
  return r;
}

// ---------------------------------------------------------------------------
// Builds from surface and target text

struct SourceFile {
  std::string name;  // extension selects the format: .mp, .ic or .tgt
  std::string text;
};

/// A build lowered to the target level, with the names used.
struct TargetBuild {
  TargetProgram program;
  surface::Symbols symbols;
};

/// Surface units are elaborated together and compiled one component at a
/// time; target units are parsed with the same names. Everything is linked.
inline TargetBuild build_target(const std::vector<SourceFile>& files) {
  std::vector<surface::SurfaceUnit> units;
  for (const auto& f : files) {
    if (f.name.ends_with(".mp")) units.push_back(surface::parse_unit(f.text, f.name));
  }
  surface::Build b = surface::elaborate(units);
  TargetBuild out{{}, b.symbols};
  std::vector<TargetProgram> parts;
  for (const auto& c : b.components) {
    parts.push_back(compile_to_target(compile_program(c)));
  }
  for (const auto& f : files) {
    if (f.name.ends_with(".tgt")) {
      parts.push_back(text::parse_target(f.text, out.symbols.names, f.name));
    } else if (f.name.ends_with(".ic")) {
      parts.push_back(compile_to_target(
          text::parse_interm(f.text, out.symbols.names, f.name)));
    }
  }
  out.program = link_target(parts);
  return out;
}

inline std::vector<SourceFile> library_files() {
  return {{"unit.mp", std::string(library::kUnit)},
          {"bool.mp", std::string(library::kBool)},
          {"bnat4.mp", std::string(library::kBNat4)}};
}

// ---------------------------------------------------------------------------
// Attacks

/// Compiled driver for every attack: main calls `evil.go(t)`.
inline constexpr std::string_view kAttackDriver =
    R"(// Honest main component; all attacks are reached through evil.go.
export obj decl main : Main
export class decl Main { Bool run(Main) }

import class decl Evil { Bool go(Bool) }
import obj decl evil : Evil
import class decl Bool { Bool not(Unit), Bool and(Bool), Bool or(Bool) }
import obj decl t, f : Bool
import class decl Unit { }

obj main : Main { }
class Main {
  Bool run(Main) { evil.go(t) }
}
)";

/// Interface and data of the attacker; only the code of Evil.go varies.
inline constexpr std::string_view kAttackerPrelude =
    R"(export class Evil { Bool(Bool) }
export obj evil : Evil
import class Bool { Bool(Unit), Bool(Bool), Bool(Bool) }
import class Unit { }
import class BNat4 { BNat4(BNat4), BNat4(BNat4) }
import obj t : Bool
import obj two : BNat4
region objl evil
region stackl Evil
  stackl Evil+0
  0 x 16
region methl Evil 1
)";

struct Attack {
  std::string id;
  std::string description;
  std::string code;  // body of region methl Evil 1
  target::FailKind expected_kind;
  std::string expected_detail;  // policy rule or machine check detail

  std::string expected() const {
    return target::to_string(target::Failstop{expected_kind, expected_detail});
  }
  std::string attacker_text() const {
    return std::string(kAttackerPrelude) + code;
  }
};

inline std::vector<Attack> attack_catalog() {
  using target::FailKind;
  return {
      {"A1", "load a field of another compartment's object",
       "  Const objl two+1 r_aux1\n"
       "  Load r_aux1 r_aux2\n"
       "  Halt\n",
       FailKind::kPolicy, "load-foreign-cell"},
      {"A2", "call into the middle of a method",
       "  Const methl Bool 1+1 r_aux3\n"
       "  Jal r_aux3\n"
       "  Halt\n",
       FailKind::kPolicy, "jal-non-entry"},
      {"A3", "jump into another compartment without a return capability",
       "  Const methl Bool 1+3 r_aux1\n"
       "  Jump r_aux1\n"
       "  Halt\n",
       FailKind::kPolicy, "jump-no-capability"},
      {"A4", "replay a return capability through memory",
       "  Const stackl Evil+1 r_sp\n"
       "  Store r_sp r_a\n"
       "  Load r_sp r_aux1\n"
       "  Load r_sp r_aux2\n"
       "  Mov r_arg r_ret\n"
       "  Jump r_aux2\n"
       "  Halt\n",
       FailKind::kPolicy, "jump-cleared-capability"},
      {"A5", "call a method with an argument of the wrong class",
       "  Const objl t+0 r_tgt\n"
       "  Const methl Bool 1+0 r_aux3\n"
       "  Jal r_aux3\n"
       "  Halt\n",
       FailKind::kPolicy, "jal-arg-type"},
      {"A6", "return a result of the wrong class",
       "  Const objl evil+0 r_ret\n"
       "  Jump r_a\n"
       "  Halt\n",
       FailKind::kPolicy, "jump-ret-type"},
      {"A7", "overwrite code of another compartment",
       "  Const methl Bool 1+0 r_aux1\n"
       "  Store r_aux1 r_arg\n"
       "  Halt\n",
       FailKind::kPolicy, "store-foreign-cell"},
      {"A8", "branch past the end of the region",
       "  Const 1 r_aux1\n"
       "  Bnz r_aux1 1\n"
       "  Halt\n",
       FailKind::kOutOfRange, "invalid address"},
  };
}

/// Well-behaved attacker: returns its argument. Used as a control.
inline Attack benign_attacker() {
  return {"A0", "honest callee returning its argument",
          "  Mov r_arg r_ret\n"
          "  Jump r_a\n",
          target::FailKind::kPolicy, ""};
}

inline std::vector<SourceFile> attack_files(const Attack& a) {
  std::vector<SourceFile> files{{"driver.mp", std::string(kAttackDriver)}};
  for (auto& f : library_files()) files.push_back(std::move(f));
  files.push_back({"evil.tgt", a.attacker_text()});
  return files;
}

struct AttackOutcome {
  Attack attack;
  TargetRun run;
  bool passed = false;  // fail-stopped with the expected reason
};

inline constexpr std::uint64_t kAttackFuel = 10'000;

inline AttackOutcome run_attack(const Attack& a,
                                const policy::MicroPolicy& policy =
                                    policy::MicroPolicy{}) {
  TargetBuild b = build_target(attack_files(a));
  AttackOutcome out{a, observe_target(b.program, policy, kAttackFuel,
                                      LinearityCheck::kFullScan, false),
                    false};
  out.passed = out.run.failstop && out.run.failstop->kind == a.expected_kind &&
               out.run.failstop->detail == a.expected_detail &&
               !out.run.linearity_violation;
  return out;
}

inline std::vector<AttackOutcome> attack_suite() {
  std::vector<AttackOutcome> out;
  for (const auto& a : attack_catalog()) out.push_back(run_attack(a));
  return out;
}

// ---------------------------------------------------------------------------
// Random well-typed programs

struct GenOptions {
  std::size_t max_classes = 3;
  std::size_t max_objects = 4;
  std::size_t max_methods = 3;
  std::size_t max_fields = 2;
  int max_depth = 5;
};

struct GeneratedProgram {
  source::SourceProgram program;
  surface::Symbols symbols;
};

namespace detail {

class Generator {
 public:
  Generator(std::mt19937_64& rng, const GenOptions& opt) : rng_(rng), opt_(opt) {}

  GeneratedProgram generate() {
    const std::size_t nc = pick(1, opt_.max_classes);
    const std::size_t no = pick(nc, std::max(nc, opt_.max_objects));
    for (std::size_t c = 0; c < nc; ++c) {
      sym_.names.intern_class("C" + std::to_string(c));
    }
    // Every class gets one object; the rest are spread at random.
    for (std::size_t o = 0; o < no; ++o) {
      sym_.names.intern_object("o" + std::to_string(o));
      ClassName c{o < nc ? o : pick(0, nc - 1)};
      objects_of_[c].push_back(ObjectName{o});
      object_class_[ObjectName{o}] = c;
    }
    for (std::size_t c = 0; c < nc; ++c) {
      source::ClassDef cd{ClassName{c}, {}, {}};
      const std::size_t nf = pick(0, opt_.max_fields);
      for (std::size_t f = 0; f < nf; ++f) {
        cd.field_types.push_back(random_class(nc));
        sym_.field_names[cd.name].push_back("f" + std::to_string(f + 1));
      }
      const std::size_t nm = pick(c == 0 ? 1 : 0, opt_.max_methods);
      for (std::size_t m = 0; m < nm; ++m) {
        MethodSig s{random_class(nc), random_class(nc)};
        if (c == 0 && m == 0) s.arg_class = kMainClass;
        cd.methods.push_back({s, nullptr});
        sym_.method_names[cd.name].push_back("m" + std::to_string(m + 1));
      }
      p_.classes.emplace(cd.name, cd);
      p_.interface.exports.classes.emplace(cd.name, declaration_of(cd));
    }
    for (const auto& [o, c] : object_class_) {
      source::ObjectDef od{o, c, {}};
      for (ClassName ft : p_.classes.at(c).field_types) {
        od.field_values.push_back(random_object(ft));
      }
      p_.objects.emplace(o, od);
      p_.interface.exports.objects.emplace(o, ObjDecl{o, c});
    }
    main_result_ = p_.classes.at(kMainClass).methods[0].sig.result_class;
    for (auto& [c, cd] : p_.classes) {
      for (auto& md : cd.methods) {
        self_ = c;
        sig_ = md.sig;
        md.body = expr(md.sig.result_class, opt_.max_depth);
      }
    }
    return {p_, sym_};
  }

 private:
  std::size_t pick(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  ClassName random_class(std::size_t nc) { return ClassName{pick(0, nc - 1)}; }
  ObjectName random_object(ClassName c) {
    const auto& os = objects_of_.at(c);
    return os[pick(0, os.size() - 1)];
  }

  // Methods of any class returning `t`.
  std::vector<std::pair<ClassName, MethodIndex>> producers(ClassName t) const {
    std::vector<std::pair<ClassName, MethodIndex>> out;
    for (const auto& [c, cd] : p_.classes) {
      for (std::size_t m = 0; m < cd.methods.size(); ++m) {
        if (cd.methods[m].sig.result_class == t) {
          out.emplace_back(c, MethodIndex{m + 1});
        }
      }
    }
    return out;
  }

  source::ExprPtr atom(ClassName t) {
    std::vector<source::ExprPtr> choices{source::ref(random_object(t))};
    if (self_ == t) choices.push_back(source::this_());
    if (sig_.arg_class == t) choices.push_back(source::arg());
    const auto& fields = p_.classes.at(self_).field_types;
    for (std::size_t f = 0; f < fields.size(); ++f) {
      if (fields[f] == t) {
        choices.push_back(source::select(source::this_(), FieldIndex{f + 1}));
      }
    }
    return choices[pick(0, choices.size() - 1)];
  }

  // `may_exit`: the expression may have no class because it always exits.
  // Call receivers must yield an object.
  source::ExprPtr expr(ClassName t, int depth, bool may_exit = true) {
    if (depth <= 0) return atom(t);
    const std::size_t nc = p_.classes.size();
    switch (pick(0, 9)) {
      case 0:
      case 1:
        return atom(t);
      case 2: {  // field update on this
        const auto& fields = p_.classes.at(self_).field_types;
        std::vector<std::size_t> fs;
        for (std::size_t f = 0; f < fields.size(); ++f) {
          if (fields[f] == t) fs.push_back(f);
        }
        if (fs.empty()) return atom(t);
        const std::size_t f = fs[pick(0, fs.size() - 1)];
        return source::update(source::this_(), FieldIndex{f + 1},
                              expr(t, depth - 1));
      }
      case 3:
      case 4:
      case 5: {  // call
        auto ps = producers(t);
        if (ps.empty()) return atom(t);
        auto [c, m] = ps[pick(0, ps.size() - 1)];
        const MethodSig& s = p_.classes.at(c).methods[m.value - 1].sig;
        return source::call(expr(c, depth - 1, false), m,
                            expr(s.arg_class, depth - 1));
      }
      case 6:
      case 7: {  // conditional
        ClassName u = random_class(nc);
        return source::if_eq(expr(u, depth - 1), expr(u, depth - 1),
                             expr(t, depth - 1, may_exit), expr(t, depth - 1, false));
      }
      case 8:
        return source::seq(expr(random_class(nc), depth - 1),
                           expr(t, depth - 1, may_exit));
      default:
        // Exits are rare so that most programs return normally.
        if (may_exit && pick(0, 3) == 0) {
          return source::exit(expr(main_result_, depth - 1));
        }
        return atom(t);
    }
  }

  std::mt19937_64& rng_;
  GenOptions opt_;
  source::SourceProgram p_;
  surface::Symbols sym_;
  std::map<ClassName, std::vector<ObjectName>> objects_of_;
  std::map<ObjectName, ClassName> object_class_;
  ClassName main_result_{};
  ClassName self_{};
  MethodSig sig_{};
};

}  // namespace detail

/// Random complete program that typechecks. Main is method 1 of class 0 and
/// object 0 belongs to class 0.
inline GeneratedProgram generate_program(std::mt19937_64& rng,
                                         const GenOptions& opt = {}) {
  return detail::Generator(rng, opt).generate();
}

}  // namespace micropol::harness

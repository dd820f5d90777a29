// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion, non-zero exit status if
// any criterion fails.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "micropol/micropol.hpp"
#include "support.hpp"

namespace {

using namespace micropol;
namespace fs = std::filesystem;
using K = harness::Observable::Kind;

// Generated programs that must be compared at all three levels; runs that
// exhaust the target stack are not compared and do not count.
constexpr std::size_t kGeneratedCompared = 200;
constexpr std::size_t kMaxGenerated = 2000;
constexpr std::uint64_t kSeed = 20261016;
constexpr std::uint64_t kFuel = 200'000;
constexpr double kTimeLimitSeconds = 60.0;

int failures = 0;

void report(bool ok, const std::string& criterion, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << criterion << ": " << detail << "\n";
  if (!ok) ++failures;
}

// A complete program under test, with the names it was written with.
struct Subject {
  std::string label;
  source::SourceProgram program;
  NameTable names;
  std::string expected;  // empty for generated programs
};

std::vector<Subject> corpus_subjects() {
  std::vector<Subject> out;
  const fs::path drivers = fs::path(MICROPOL_CORPUS_DIR) / "drivers";
  for (const auto& dir : toolchain::suite_members(drivers)) {
    toolchain::LoadedBuild b = toolchain::load(toolchain::read_build(dir));
    std::string expected = testing::read_data(dir / "expected");
    while (!expected.empty() && expected.back() == '\n') expected.pop_back();
    out.push_back({dir.filename().string(), toolchain::at_source(b), b.symbols.names,
                   expected});
  }
  return out;
}


bool has_driver(const std::vector<Subject>& corpus, const std::string& name,
                const std::string& expected) {
  for (const auto& s : corpus) {
    if (s.label == name && s.expected == expected) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------

struct DiffOutcome {
  std::size_t runs = 0, compared = 0, mismatches = 0, excluded = 0, policy_failstops = 0;
  std::size_t linearity = 0;
  std::vector<std::string> problems;
};

void differential(const Subject& s, bool check_expected, harness::LinearityCheck check,
                  const policy::MicroPolicy& pol, DiffOutcome& out) {
  {
    harness::DiffReport r = harness::run_differential(s.program, kFuel, pol, check);
    ++out.runs;
    bool ok = r.agree;
    if (check_expected && harness::describe(r.src, s.names) != s.expected) ok = false;
    if (r.excluded) {
      ++out.excluded;
    } else {
      ++out.compared;
    }
    if (!ok) {
      ++out.mismatches;
      out.problems.push_back(s.label + ": " + r.describe(s.names));
    }
    if (r.tgt_failstop && r.tgt_failstop->kind == target::FailKind::kPolicy) {
      ++out.policy_failstops;
      out.problems.push_back(s.label + ": policy " + target::to_string(*r.tgt_failstop));
    }
    if (r.linearity_violation) {
      ++out.linearity;
      out.problems.push_back(s.label + ": linearity " + *r.linearity_violation);
    }
  }
}

std::string first_problem(const DiffOutcome& d) {
  return d.problems.empty() ? "" : "; first: " + d.problems.front();
}

// Region length of every compiled method against its intermediate code.
std::size_t length_violations(const std::vector<Subject>& subjects, std::size_t& methods) {
  std::size_t bad = 0;
  for (const auto& s : subjects) {
    const interm::IProgram ip = compile_program(s.program);
    const TargetProgram tp = compile_to_target(ip);
    for (const auto& [c, comp] : ip.compartments) {
      for (std::size_t m = 0; m < comp.methods.size(); ++m) {
        const auto& region = tp.regions.at(target::Loc::method(c, MethodIndex{m + 1}));
        ++methods;
        if (region.size() != 5 + length(comp.methods[m].code)) ++bad;
      }
    }
  }
  return bad;
}

// ---------------------------------------------------------------------------
// Machine-level fail-stop clauses on a hand-made state.

target::TaggedMachineState machine(const std::vector<target::Word>& code) {
  using target::Loc;
  auto cell = [](target::Word w) {
    return target::Cell{std::move(w), MemTag{std::nullopt, ClassName{0}, std::nullopt,
                                             ValTag::word()}};
  };
  target::TaggedMachineState s;
  const Loc here = Loc::method(ClassName{0}, MethodIndex{1});
  for (const auto& w : code) s.memory[here].push_back(cell(w));
  s.memory[Loc::object(ObjectName{0})] = {cell(target::int_word(1))};
  s.pc = target::Ptr{here, 0};
  return s;
}

std::optional<target::FailKind> failstop_kind(const std::vector<target::Word>& code) {
  auto s = machine(code);
  auto r = target::run(s, target::PermitAll{}, 100);
  if (auto* f = std::get_if<target::Failstop>(&r)) return f->kind;
  return std::nullopt;
}

void machine_clauses() {
  using target::FailKind;
  using target::Instr;
  using target::Integer;
  using target::Ptr;
  using enum target::RegName;
  const target::Loc obj = target::Loc::object(ObjectName{0});
  const target::Loc code = target::Loc::method(ClassName{0}, MethodIndex{1});
  auto enc = [](const std::vector<Instr>& is) {
    std::vector<target::Word> out;
    for (const auto& i : is) out.push_back(target::encode(i));
    out.push_back(target::encode(Instr::halt()));
    return out;
  };
  struct Clause {
    const char* name;
    std::vector<target::Word> code;
    FailKind expected;
  };
  const Instr int3 = Instr::const_(Integer(3), r_aux1);
  const Instr ptr = Instr::const_(Ptr{obj, 0}, r_aux1);
  const Instr code_ptr = Instr::const_(Ptr{code, 0}, r_aux3);
  const Instr enc_load = Instr::load(r_aux3, r_aux1);
  const std::vector<Clause> clauses = {
      {"decode integer", {target::int_word(5)}, FailKind::kDecode},
      {"decode pointer", {target::ptr_word(obj)}, FailKind::kDecode},
      {"load via integer", enc({int3, Instr::load(r_aux1, r_aux2)}), FailKind::kBadPointer},
      {"store via integer", enc({int3, Instr::store(r_aux1, r_aux2)}), FailKind::kBadPointer},
      {"jump via integer", enc({int3, Instr::jump(r_aux1)}), FailKind::kBadPointer},
      {"jal via integer", enc({int3, Instr::jal(r_aux1)}), FailKind::kBadPointer},
      {"load via instruction", enc({code_ptr, enc_load, Instr::load(r_aux1, r_aux2)}),
       FailKind::kEncodedOperand},
      {"mov of instruction", enc({code_ptr, enc_load, Instr::mov(r_aux1, r_aux2)}),
       FailKind::kEncodedOperand},
      {"ptr + ptr", enc({ptr, Instr::add(r_aux1, r_aux1, r_aux2)}), FailKind::kPointerMisuse},
      {"int - ptr", enc({ptr, Instr::sub(r_one, r_aux1, r_aux2)}), FailKind::kPointerMisuse},
      {"ptr == int", enc({ptr, Instr::eq(r_aux1, r_one, r_aux2)}), FailKind::kPointerMisuse},
      {"bnz on pointer", enc({ptr, Instr::bnz(r_aux1, Integer(0))}), FailKind::kPointerMisuse},
      {"load out of range", enc({Instr::const_(Ptr{obj, 1}, r_aux1), Instr::load(r_aux1, r_aux2)}),
       FailKind::kOutOfRange},
  };
  std::size_t ok = 0;
  std::string bad;
  for (const auto& c : clauses) {
    auto k = failstop_kind(c.code);
    if (k == c.expected) {
      ++ok;
    } else if (bad.empty()) {
      bad = std::string("; failed: ") + c.name;
    }
  }
  report(ok == clauses.size(), "7 machine fail-stops",
         std::to_string(ok) + "/" + std::to_string(clauses.size()) +
             " clauses fail-stop with the expected kind" + bad);
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<Subject> corpus = corpus_subjects();

  // 1 + 3 + 5: differential runs, policy coverage and linearity.
  policy::MicroPolicy coverage;
  DiffOutcome corpus_diff, gen_diff;
  for (const auto& s : corpus) {
    differential(s, true, harness::LinearityCheck::kFullScan, coverage, corpus_diff);
  }
  std::vector<Subject> generated;
  std::mt19937_64 rng(kSeed);
  while (gen_diff.compared < kGeneratedCompared && generated.size() < kMaxGenerated) {
    harness::GeneratedProgram g = harness::generate_program(rng);
    generated.push_back({"generated #" + std::to_string(generated.size()), g.program,
                         g.symbols.names, ""});
    differential(generated.back(), false, harness::LinearityCheck::kIncremental, coverage,
                 gen_diff);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool required_drivers = has_driver(corpus, "bnat_add", "Terminated two") &&
                                has_driver(corpus, "bool_and", "Terminated f") &&
                                has_driver(corpus, "exit_direct", "Terminated f") &&
                                has_driver(corpus, "exit_nested", "Terminated f");
  {
    std::ostringstream d;
    d << corpus.size() << " corpus drivers (" << corpus_diff.compared << " compared), "
      << gen_diff.compared << " generated programs compared at all levels ("
      << gen_diff.excluded << " more excluded for target stack exhaustion), "
      << corpus_diff.mismatches + gen_diff.mismatches << " mismatches, "<< static_cast<int>(seconds * 1000)
      << " ms" << first_problem(corpus_diff) << first_problem(gen_diff);
    report(corpus.size() >= 10 && corpus_diff.compared == corpus.size() && required_drivers &&
               gen_diff.compared >= kGeneratedCompared &&
               corpus_diff.mismatches == 0 && gen_diff.mismatches == 0 &&
               seconds < kTimeLimitSeconds,
           "1 differential src/ic/tgt", d.str());
  }

  // 2: compiled lengths.
  {
    std::size_t methods = 0;
    std::size_t bad = length_violations(corpus, methods) + length_violations(generated, methods);
    using interm::IInstr;
    const bool literal = expansion_length(IInstr::call(ClassName{0}, MethodIndex{1})) == 18 &&
                         expansion_length(IInstr::ret()) == 6 &&
                         expansion_length(IInstr::upd(FieldIndex{1})) == 7;
    report(bad == 0 && literal && methods > 0, "2 length consistency",
           std::to_string(methods) + " methods with region = 5 + L(body), " +
               std::to_string(bad) + " violations; L(Call)=18 L(Ret)=6 L(Upd)=7 " +
               (literal ? "hold" : "do not hold"));
  }

  // 3: transparency.
  {
    std::size_t unfired = 0;
    std::string missing;
    for (int r = 1; r <= policy::kRuleCount; ++r) {
      if (coverage.hits(r) == 0) {
        ++unfired;
        missing += std::string(" ") + policy::rule_name(r);
      }
    }
    const std::size_t stops = corpus_diff.policy_failstops + gen_diff.policy_failstops;
    report(stops == 0 && unfired == 0, "3 transparency",
           std::to_string(stops) + " policy fail-stops on compiled code, " +
               std::to_string(policy::kRuleCount - unfired) + "/" +
               std::to_string(policy::kRuleCount) + " rules fired" +
               (missing.empty() ? "" : "; never:" + missing));
  }

  // 4 + 5: attacks.
  std::size_t attack_linearity = 0;
  {
    std::size_t passed = 0, total = 0;
    std::string detail;
    for (const auto& a : harness::attack_suite()) {
      ++total;
      if (a.passed && a.run.steps <= harness::kAttackFuel) ++passed;
      if (a.run.linearity_violation) ++attack_linearity;
      detail += " " + a.attack.id + "=" +
                (a.run.failstop ? target::to_string(*a.run.failstop) : std::string("none"));
    }
    report(passed == total && total == 8, "4 attacks fail-stop",
           std::to_string(passed) + "/" + std::to_string(total) + " within " +
               std::to_string(harness::kAttackFuel) + " steps:" + detail);
  }
  {
    const std::size_t v = corpus_diff.linearity + gen_diff.linearity + attack_linearity;
    report(v == 0, "5 linearity",
           std::to_string(v) + " violations after every step of " +
               std::to_string(corpus.size()) + " corpus runs (full scan), " +
               std::to_string(generated.size()) + " generated runs (incremental) and " +
               "8 attack runs (full scan)");
  }

  // 6: golden image.
  {
    std::vector<std::pair<std::string, std::string>> files;
    for (auto& f : harness::library_files()) files.emplace_back(f.name, f.text);
    surface::Build lib = surface::parse_build(files);
    const std::string image = text::dump_image(
        tag_memory(compile_to_target(compile_program(lib.components[1]))), lib.symbols.names);
    const fs::path golden = testing::golden_dir() / "bool_image.txt";
    const bool present = fs::exists(golden);
    const bool same = present && image == testing::read_data(golden);
    report(same, "6 golden Bool image",
           present ? (same ? "tagged image matches" : "tagged image differs")
                   : "golden file missing");
  }

  // 7: machine fail-stop clauses.
  machine_clauses();

  std::cout << (failures ? "FAILED " : "ALL PASSED ") << failures << " failing\n";
  return failures ? 1 : 0;
}

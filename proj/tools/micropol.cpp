// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0
//
// micropol: check, compile, link, run, trace and cross-check programs.
//
// Exit codes: 0 ok, 1 usage or I/O error, 2 parse or type error, 3 link or
// load error, 4 fail-stop, 5 out of fuel, 6 differential mismatch.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "micropol/micropol.hpp"

namespace {

using namespace micropol;
namespace fs = std::filesystem;

enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kLink = 3,
  kFailstop = 4,
  kOutOfFuel = 5,
  kMismatch = 6,
};

constexpr std::uint64_t kDefaultFuel = 1'000'000;

struct Options {
  std::vector<std::string> inputs;
  std::vector<std::string> entry;
  std::string level = "tgt";
  std::string to = "tgt";
  std::string output;
  std::uint64_t fuel = 0;
  std::size_t stack = kDefaultStackCapacity;
  bool stats = false;
  bool image = false;
};

std::uint64_t effective_fuel(const Options& o) {
  if (o.fuel) return o.fuel;
  if (const char* env = std::getenv("MICROPOL_FUEL")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error("MICROPOL_FUEL is not a number: " + std::string(env));
    }
  }
  return kDefaultFuel;
}

// `--entry Class.method object`
std::optional<surface::Entry> parse_entry(const std::vector<std::string>& e) {
  if (e.empty()) return std::nullopt;
  const auto dot = e[0].find('.');
  if (e.size() != 2 || dot == std::string::npos) {
    throw Error("--entry expects 'Class.method object'");
  }
  return surface::Entry{e[0].substr(0, dot), e[0].substr(dot + 1), e[1]};
}

std::vector<toolchain::SourceFile> read_inputs(const Options& o) {
  std::vector<toolchain::SourceFile> files;
  for (const auto& in : o.inputs) {
    for (auto& f : toolchain::read_build(in)) files.push_back(std::move(f));
  }
  return files;
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.output, std::ios::binary);
  if (!out) throw Error("cannot write " + o.output);
  out << text;
}

int exit_for(const harness::Observable& ob) {
  switch (ob.kind) {
    case harness::Observable::Kind::kTerminated:
      return kOk;
    case harness::Observable::Kind::kOutOfFuel:
      return kOutOfFuel;
    default:
      return kFailstop;
  }
}

// ---------------------------------------------------------------------------

int cmd_check(const Options& o) {
  auto b = toolchain::load(read_inputs(o), parse_entry(o.entry));
  std::size_t components = b.components.size();
  std::cout << "ok: " << components << " component"
            << (components == 1 ? "" : "s") << " typecheck\n";
  return kOk;
}

int cmd_compile(const Options& o) {
  auto b = toolchain::load(read_inputs(o), parse_entry(o.entry));
  if (o.to == "ic") {
    emit(o, text::print(toolchain::at_interm(b), b.symbols.names));
  } else {
    emit(o, text::print(toolchain::at_target(b, o.stack), b.symbols.names));
  }
  return kOk;
}

int cmd_link(const Options& o) {
  auto b = toolchain::load(read_inputs(o), parse_entry(o.entry));
  TargetProgram p = toolchain::at_target(b, o.stack);
  if (auto errs = check_program(p); !errs.empty()) {
    throw LinkError(describe(errs));
  }
  emit(o, text::print(p, b.symbols.names));
  return kOk;
}

harness::Observable run_one(const Options& o, const toolchain::LoadedBuild& b,
                            std::uint64_t* steps) {
  const std::uint64_t fuel = effective_fuel(o);
  if (o.level == "src") {
    return harness::observe_source(toolchain::at_source(b), fuel, steps);
  }
  if (o.level == "ic") {
    return harness::observe_interm(toolchain::at_interm(b), fuel, steps);
  }
  policy::MicroPolicy pol;
  auto r = harness::observe_target(toolchain::at_target(b, o.stack), pol, fuel);
  if (steps) *steps = r.steps;
  return r.observable;
}

int cmd_run(const Options& o) {
  auto b = toolchain::load(read_inputs(o), parse_entry(o.entry));
  std::uint64_t steps = 0;
  harness::Observable ob = run_one(o, b, &steps);
  std::cout << harness::describe(ob, b.symbols.names) << "\n";
  if (o.stats) std::cerr << "steps: " << steps << "\n";
  return exit_for(ob);
}

int cmd_trace(const Options& o) {
  auto b = toolchain::load(read_inputs(o), parse_entry(o.entry));
  const NameTable& n = b.symbols.names;
  target::TaggedMachineState s = boot_state(toolchain::at_target(b, o.stack));
  if (o.image) std::cout << text::dump_image(s.memory, n);
  policy::MicroPolicy pol;
  std::uint64_t step = 0;
  auto observer = [&](const target::TaggedMachineState& st,
                      const target::StepRecord& rec,
                      const target::StepResult& r) {
    std::cout << text::trace_line(step++, st, rec, r, n) << "\n";
  };
  target::RunResult r = target::run(s, pol, effective_fuel(o), observer);
  harness::Observable ob;
  if (std::holds_alternative<target::Halted>(r)) {
    auto res = halted_result(s);
    ob = res ? harness::Observable::terminated(*res)
             : harness::Observable::failstop("halted without an object");
  } else if (auto* f = std::get_if<target::Failstop>(&r)) {
    ob = harness::Observable::failstop(target::to_string(*f));
  } else {
    ob = harness::Observable::out_of_fuel();
  }
  std::cout << harness::describe(ob, n) << "\n";
  if (o.image) std::cout << text::dump_registers(s, n);
  return exit_for(ob);
}

int cmd_image(const Options& o) {
  auto b = toolchain::load(read_inputs(o), parse_entry(o.entry));
  TargetProgram p = toolchain::at_target(b, o.stack);
  if (is_complete(p.interface)) {
    emit(o, text::dump_image(boot_state(p).memory, b.symbols.names));
  } else {
    // A partial program: tags of its own memory only.
    emit(o, text::dump_image(tag_memory(p), b.symbols.names));
  }
  return kOk;
}

int diff_build(const Options& o, const std::string& label,
               const std::vector<toolchain::SourceFile>& files) {
  auto b = toolchain::load(files, parse_entry(o.entry));
  policy::MicroPolicy pol;
  auto r = harness::run_differential(toolchain::at_source(b),
                                     effective_fuel(o), pol,
                                     harness::LinearityCheck::kIncremental,
                                     o.stack);
  const bool ok = r.agree && !r.linearity_violation;
  std::cout << (ok ? "agree    " : "MISMATCH ") << label << ": "
            << r.describe(b.symbols.names) << "\n";
  return ok ? kOk : kMismatch;
}

int cmd_diff(const Options& o) {
  int worst = kOk;
  auto record = [&](int code) {
    if (code != kOk && (worst == kOk || code == kMismatch)) worst = code;
  };
  if (o.inputs.size() == 1) {
    auto members = toolchain::suite_members(o.inputs[0]);
    if (!members.empty()) {
      for (const auto& m : members) {
        try {
          record(diff_build(o, m.string(), toolchain::read_build(m)));
        } catch (const Error& e) {
          std::cout << "ERROR    " << m.string() << ": " << e.what() << "\n";
          record(kMismatch);
        }
      }
      return worst;
    }
  }
  std::string label;
  for (const auto& in : o.inputs) label += (label.empty() ? "" : " ") + in;
  return diff_build(o, label, read_inputs(o));
}

int cmd_attacks(const Options&) {
  int failures = 0;
  NameTable none;
  for (const auto& a : harness::attack_suite()) {
    const std::string got =
        a.run.failstop ? target::to_string(*a.run.failstop)
                       : harness::describe(a.run.observable, none);
    std::cout << a.attack.id << " " << (a.passed ? "PASS " : "FAIL ") << got
              << "  (" << a.attack.description << ")\n";
    if (!a.passed) ++failures;
  }
  return failures ? kFailstop : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"micropol: secure compilation toolchain for a small object "
               "language"};
  app.require_subcommand(1);
  Options o;

  auto inputs = [&](CLI::App* sub) {
    sub->add_option("inputs", o.inputs, "files or build directories")
        ->required();
    sub->add_option("--entry", o.entry,
                    "entry point: Class.method object (surface files only)")
        ->expected(2);
  };
  auto fuel = [&](CLI::App* sub) {
    sub->add_option("--fuel", o.fuel,
                    "step budget (default 1000000, or MICROPOL_FUEL)");
  };
  auto stack = [&](CLI::App* sub) {
    sub->add_option("--stack", o.stack, "cells per compiled local stack")
        ->check(CLI::PositiveNumber);
  };

  auto* check = app.add_subcommand("check", "parse and typecheck");
  inputs(check);

  auto* compile = app.add_subcommand("compile", "emit intermediate or target text");
  inputs(compile);
  compile->add_option("--to", o.to, "ic or tgt")
      ->check(CLI::IsMember({"ic", "tgt"}));
  compile->add_option("-o,--output", o.output, "output file");
  stack(compile);

  auto* link = app.add_subcommand("link", "link at target level and check");
  inputs(link);
  link->add_option("-o,--output", o.output, "output file");
  stack(link);

  auto* run = app.add_subcommand("run", "execute and print the outcome");
  inputs(run);
  run->add_option("--level", o.level, "src, ic or tgt")
      ->check(CLI::IsMember({"src", "ic", "tgt"}));
  fuel(run);
  stack(run);
  run->add_flag("--stats", o.stats, "print the step count on stderr");

  auto* trace = app.add_subcommand("trace", "target run with per-step tags");
  inputs(trace);
  fuel(trace);
  stack(trace);
  trace->add_flag("--image", o.image,
                  "also dump the loaded image and the final registers");

  auto* image = app.add_subcommand("image", "dump the tagged memory image");
  inputs(image);
  image->add_option("-o,--output", o.output, "output file");
  stack(image);

  auto* diff = app.add_subcommand("diff", "run at all levels and compare");
  inputs(diff);
  fuel(diff);
  stack(diff);

  auto* attacks = app.add_subcommand("attacks", "run the attack catalog");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(o);
    if (compile->parsed()) return cmd_compile(o);
    if (link->parsed()) return cmd_link(o);
    if (run->parsed()) return cmd_run(o);
    if (trace->parsed()) return cmd_trace(o);
    if (image->parsed()) return cmd_image(o);
    if (diff->parsed()) return cmd_diff(o);
    if (attacks->parsed()) return cmd_attacks(o);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const TypeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const LinkError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kLink;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

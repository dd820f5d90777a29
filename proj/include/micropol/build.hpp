// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Reading builds from disk and lowering them to a common level.
//
// A build is a single file or a directory. A directory lists its files in a
// `build` manifest (one relative path per line, `//` comments), or else
// consists of its .mp/.ic/.tgt files in name order. A directory with neither
// but with subdirectories is a suite: each subdirectory is its own build.

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "micropol/compile_i2t.hpp"
#include "micropol/compile_s2i.hpp"
#include "micropol/formats.hpp"
#include "micropol/harness.hpp"
#include "micropol/loader.hpp"
#include "micropol/source_typing.hpp"
#include "micropol/syntax.hpp"

namespace micropol::toolchain {

namespace fs = std::filesystem;
using harness::SourceFile;

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline bool is_program_file(const fs::path& p) {
  const auto e = p.extension();
  return e == ".mp" || e == ".ic" || e == ".tgt";
}

inline std::vector<fs::path> build_paths(const fs::path& p) {
  if (!fs::is_directory(p)) {
    if (!fs::exists(p)) throw Error("no such file: " + p.string());
    return {p};
  }
  std::vector<fs::path> out;
  const fs::path manifest = p / "build";
  if (fs::exists(manifest)) {
    std::istringstream in(read_file(manifest));
    std::string line;
    while (std::getline(in, line)) {
      if (auto c = line.find("//"); c != std::string::npos) line.resize(c);
      line.erase(0, line.find_first_not_of(" \t\r"));
      line.erase(line.find_last_not_of(" \t\r") + 1);
      if (!line.empty()) out.push_back(p / line);
    }
    return out;
  }
  for (const auto& e : fs::directory_iterator(p)) {
    if (e.is_regular_file() && is_program_file(e.path())) {
      out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Subdirectories forming a suite, or empty when `p` is a build itself.
inline std::vector<fs::path> suite_members(const fs::path& p) {
  if (!fs::is_directory(p) || !build_paths(p).empty()) return {};
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(p)) {
    if (e.is_directory()) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<SourceFile> read_build(const fs::path& p) {
  std::vector<SourceFile> out;
  for (const auto& f : build_paths(p)) {
    if (!is_program_file(f)) {
      throw Error("unsupported file type: " + f.string());
    }
    out.push_back({f.string(), read_file(f)});
  }
  return out;
}

/// Files of a build, parsed and named; source components typechecked.
struct LoadedBuild {
  surface::Symbols symbols;
  std::vector<source::SourceProgram> components;
  std::vector<interm::IProgram> interm_parts;
  std::vector<TargetProgram> target_parts;
};

inline std::string describe_type_errors(const source::TypecheckReport& r,
                                        const std::string& where) {
  std::string msg = where + ": type errors";
  for (const auto& e : r.errors) msg += "\n  " + source::describe(e);
  return msg;
}

inline LoadedBuild load(const std::vector<SourceFile>& files,
                        const std::optional<surface::Entry>& entry = {}) {
  std::vector<surface::SurfaceUnit> units;
  for (const auto& f : files) {
    if (f.name.ends_with(".mp")) {
      units.push_back(surface::parse_unit(f.text, f.name));
    }
  }
  surface::Build b = surface::elaborate(std::move(units), entry);
  LoadedBuild out{std::move(b.symbols), std::move(b.components), {}, {}};
  std::size_t unit = 0;
  for (const auto& f : files) {
    if (f.name.ends_with(".mp")) {
      auto report = source::typecheck(out.components[unit++]);
      if (!report.ok()) throw TypeError(describe_type_errors(report, f.name));
    } else if (f.name.ends_with(".ic")) {
      out.interm_parts.push_back(
          text::parse_interm(f.text, out.symbols.names, f.name));
    } else if (f.name.ends_with(".tgt")) {
      out.target_parts.push_back(
          text::parse_target(f.text, out.symbols.names, f.name));
    }
  }
  return out;
}

inline source::SourceProgram at_source(const LoadedBuild& b) {
  if (!b.interm_parts.empty() || !b.target_parts.empty()) {
    throw Error("source-level runs need every file in surface syntax (.mp)");
  }
  source::SourceProgram p;
  for (const auto& c : b.components) p = source::link_source(p, c);
  auto report = source::typecheck(p);
  if (!report.ok()) throw TypeError(describe_type_errors(report, "linked program"));
  return p;
}

inline interm::IProgram at_interm(const LoadedBuild& b) {
  if (!b.target_parts.empty()) {
    throw Error("intermediate-level runs cannot use target files (.tgt)");
  }
  interm::IProgram p;
  for (const auto& c : b.components) {
    p = interm::link_interm(p, compile_program(c));
  }
  for (const auto& c : b.interm_parts) p = interm::link_interm(p, c);
  return p;
}

inline TargetProgram at_target(
    const LoadedBuild& b, std::size_t stack_capacity = kDefaultStackCapacity) {
  std::vector<TargetProgram> parts;
  for (const auto& c : b.components) {
    parts.push_back(compile_to_target(compile_program(c), stack_capacity));
  }
  for (const auto& c : b.interm_parts) {
    parts.push_back(compile_to_target(c, stack_capacity));
  }
  for (const auto& c : b.target_parts) parts.push_back(c);
  return link_target(parts);
}

}  // namespace micropol::toolchain

// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Shared fixtures: programs written in surface syntax on top of the standard
// library components.

#pragma once

#include <filesystem>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "micropol/micropol.hpp"

namespace micropol::testing {

namespace fs = std::filesystem;

inline fs::path corpus_dir() { return MICROPOL_CORPUS_DIR; }
inline fs::path golden_dir() { return MICROPOL_GOLDEN_DIR; }

/// License header leading every corpus and golden file.
inline constexpr std::string_view kLicenseHeader =
    "// Copyright 2026 The micropol Authors.\n"
    "// SPDX-License-Identifier: Apache-2.0\n";

/// Contents of a corpus or golden file without its license header.
inline std::string read_data(const fs::path& p) {
  std::string s = toolchain::read_file(p);
  if (s.starts_with(kLicenseHeader)) s.erase(0, kLicenseHeader.size());
  return s;
}

/// Interface lines a driver needs to use the standard components.
inline constexpr const char* kLibraryImports = R"(
import class decl Unit { }
import obj decl tt : Unit
import class decl Bool { Bool not(Unit), Bool and(Bool), Bool or(Bool) }
import obj decl t, f : Bool
import class decl BNat4 { BNat4 add(BNat4), BNat4 mul(BNat4) }
import obj decl zero, one, two, three : BNat4
)";

/// Driver whose main method has result class `result` and body `body`;
/// `extra` adds fields and methods to class Main, `init` lists the initial
/// field values of object main.
inline std::string driver(const std::string& result, const std::string& body,
                          const std::string& extra_sigs = "",
                          const std::string& extra = "",
                          const std::string& init = "") {
  // Field declarations must precede the methods of a class.
  std::string fields, methods;
  std::istringstream lines(extra);
  for (std::string line; std::getline(lines, line);) {
    const bool field = line.find('(') == std::string::npos && line.ends_with(";");
    (field ? fields : methods) += line + "\n";
  }
  return "export obj decl main : Main\n"
         "export class decl Main { " + result + " run(Main)" +
         (extra_sigs.empty() ? "" : ", " + extra_sigs) + " }\n" +
         kLibraryImports +
         "obj main : Main { " + init + " }\n"
         "class Main {\n" + fields + "  " + result + " run(Main) { " + body +
         " }\n" + methods + "}\n";
}

inline std::vector<harness::SourceFile> with_library(const std::string& text) {
  std::vector<harness::SourceFile> files{{"driver.mp", text}};
  for (auto& f : harness::library_files()) files.push_back(std::move(f));
  return files;
}

/// Driver and library, elaborated together; `program` is the linked whole.
inline surface::Build build(const std::string& driver_text) {
  std::vector<std::pair<std::string, std::string>> files;
  for (auto& f : with_library(driver_text)) files.emplace_back(f.name, f.text);
  return surface::parse_build(files);
}

/// Elaborated standard library alone (Unit, Bool, BNat4 in that order).
inline surface::Build library_build() {
  std::vector<std::pair<std::string, std::string>> files;
  for (auto& f : harness::library_files()) files.emplace_back(f.name, f.text);
  return surface::parse_build(files);
}

inline ObjectName object(const surface::Build& b, const std::string& name) {
  return *b.symbols.names.find_object(name);
}
inline ClassName klass(const surface::Build& b, const std::string& name) {
  return *b.symbols.names.find_class(name);
}

}  // namespace micropol::testing

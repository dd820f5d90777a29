// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include <sstream>

#include <gtest/gtest.h>

#include "support.hpp"

namespace micropol::surface {
namespace {

std::string parse_error(const std::string& text) {
  try {
    testing::build(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "<no error>";
}

bool contains(const std::string& s, const std::string& part) {
  return s.find(part) != std::string::npos;
}

TEST(Syntax, LexicalAndGrammarErrorsCarryPositions) {
  const std::string e1 = parse_error("export obj decl main : Main\nobj main : Main {");
  EXPECT_TRUE(contains(e1, "driver.mp:2:")) << e1;
  const std::string e2 = parse_error("class Main { Bool run(Main) { t $ f } }");
  EXPECT_TRUE(contains(e2, "driver.mp:1:")) << e2;
  EXPECT_THROW(parse_unit("class { }"), ParseError);
  EXPECT_THROW(parse_unit("obj x : C { a b }"), ParseError);
  EXPECT_NO_THROW(parse_unit("// only a comment\n"));
}

TEST(Syntax, NameResolutionErrors) {
  using testing::driver;
  EXPECT_TRUE(contains(parse_error(driver("Bool", "nobody")), "unknown object 'nobody'"));
  EXPECT_TRUE(contains(parse_error(driver("Bool", "t.nand(f)")), "no method 'nand'"));
  EXPECT_TRUE(contains(parse_error(driver("Bool", "this.x")), "no field 'x'"));
  EXPECT_TRUE(contains(parse_error(driver("BNat4", "one.pred")),
                       "only accessible on objects of the enclosing class"));
  EXPECT_TRUE(contains(parse_error(driver("Bool", "(exit t).not(tt)")),
                       "method call on an expression that exits"));
  EXPECT_TRUE(contains(
      parse_error(driver("Bool", "t") + "import obj decl t : BNat4\n"),
      "two different classes"));
  EXPECT_TRUE(contains(
      parse_error(driver("Bool", "t") + "import class decl Bool { Bool not(Unit) }\n"),
      "described inconsistently"));
}

TEST(Syntax, NumberingByFirstOccurrence) {
  const auto b = testing::build(testing::driver("Bool", "t"));
  EXPECT_EQ(b.symbols.names.find_class("Main"), kMainClass);
  EXPECT_EQ(b.symbols.names.find_object("main"), kMainObject);
  // Bool occurs in the signature of Main.run before the imports.
  EXPECT_EQ(b.symbols.names.class_name(ClassName{1}), "Bool");
  EXPECT_EQ(b.symbols.names.class_name(ClassName{2}), "Unit");
  EXPECT_EQ(b.symbols.names.object_name(ObjectName{1}), "tt");
  EXPECT_EQ(b.symbols.method_name(testing::klass(b, "Bool"), MethodIndex{2}), "and");
  EXPECT_EQ(b.components.size(), 4u);
}

TEST(Syntax, EntryPointSelection) {
  const std::string prog =
      "export class decl Prog { Bool helper(Bool), Bool go(Prog) }\n"
      "export obj decl p : Prog\n" + std::string(testing::kLibraryImports) +
      "obj p : Prog { }\n"
      "class Prog {\n"
      "  Bool helper(Bool) { arg.not(tt) }\n"
      "  Bool go(Prog) { this.helper(t) }\n"
      "}\n";
  std::vector<std::pair<std::string, std::string>> files{{"prog.mp", prog}};
  for (auto& f : harness::library_files()) files.emplace_back(f.name, f.text);
  // Without an entry, the first method of the first class is main and has
  // the wrong argument class.
  auto plain = parse_build(files);
  EXPECT_THROW(source::run(plain.program, 100), LinkError);

  auto b = parse_build(files, Entry{"Prog", "go", "p"});
  EXPECT_EQ(b.symbols.names.find_class("Prog"), kMainClass);
  EXPECT_EQ(b.symbols.names.find_object("p"), kMainObject);
  EXPECT_EQ(b.symbols.method_name(kMainClass, kMainMethod), "go");
  ASSERT_TRUE(source::typecheck(b.program).ok());
  auto r = source::run(b.program, 1000);
  ASSERT_TRUE(std::holds_alternative<source::Terminated>(r));
  EXPECT_EQ(std::get<source::Terminated>(r).result, *b.symbols.names.find_object("f"));

  EXPECT_THROW(parse_build(files, Entry{"Prog", "nope", "p"}), ParseError);
}

TEST(Syntax, PrintedProgramsParseBackToTheSameProgram) {
  const auto lib = testing::library_build();
  const std::string printed = print_source(lib.program, lib.symbols);
  auto again = parse_build({{"printed.mp", printed}});
  EXPECT_EQ(print_source(again.program, again.symbols), printed);
  EXPECT_EQ(again.program.interface, lib.program.interface);
  for (const auto& [c, cd] : lib.program.classes) {
    const auto& other = again.program.classes.at(c);
    ASSERT_EQ(cd.methods.size(), other.methods.size());
    for (std::size_t m = 0; m < cd.methods.size(); ++m) {
      EXPECT_TRUE(source::equal(cd.methods[m].body, other.methods[m].body));
    }
  }
}

TEST(Syntax, ExpressionPrinterRespectsPrecedence) {
  auto b = testing::build(testing::driver(
      "BNat4", "(this.n := one == two ? one : two); exit (this.n := three)", "",
      "  BNat4 n;\n", "zero"));
  const auto& md = b.program.classes.at(kMainClass).methods[0];
  const std::string text = print_expr(b.program, b.symbols, kMainClass, md.sig, md.body);
  auto again = testing::build(testing::driver("BNat4", text, "", "  BNat4 n;\n", "zero"));
  EXPECT_TRUE(source::equal(
      md.body, again.program.classes.at(kMainClass).methods[0].body))
      << text;
}

// Top-level declarations of printed surface text, sorted: reparsing may
// number classes differently, which reorders declarations but changes nothing
// else.
std::vector<std::string> declarations(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    if (line[0] == ' ' || line == "}") {
      out.back() += "\n" + line;
    } else {
      out.push_back(line);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Syntax, GeneratedProgramsRoundTrip) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 30; ++i) {
    auto g = harness::generate_program(rng);
    const std::string printed = print_source(g.program, g.symbols);
    auto again = parse_build({{"gen.mp", printed}});
    EXPECT_EQ(declarations(print_source(again.program, again.symbols)),
              declarations(printed));
    EXPECT_TRUE(source::typecheck(again.program).ok()) << printed;
  }
}

}  // namespace
}  // namespace micropol::surface

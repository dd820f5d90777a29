// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "support.hpp"

namespace micropol::text {
namespace {

using target::Instr;
using target::Integer;
using target::Loc;
using target::Ptr;
using enum target::RegName;

TEST(Formats, IntermediateRoundTrip) {
  const auto b = testing::build(testing::driver(
      "BNat4", "this.n := two.mul(two); this.n == three ? one : exit zero", "",
      "  BNat4 n;\n", "zero"));
  const interm::IProgram ip = compile_program(b.program);
  const std::string printed = print(ip, b.symbols.names);
  NameTable fresh;
  const interm::IProgram again = parse_interm(printed, fresh, "p.ic");
  EXPECT_EQ(print(again, fresh), printed);
  // Header lines fix the numbering, so the programs are equal, not just alike.
  EXPECT_EQ(again, ip);
}

TEST(Formats, TargetRoundTrip) {
  const auto b = testing::build(testing::driver("Bool", "t.and(f)"));
  const TargetProgram tp = compile_to_target(compile_program(b.program), 64);
  const std::string printed = print(tp, b.symbols.names);
  EXPECT_NE(printed.find("  0 x 64\n"), std::string::npos);
  NameTable fresh;
  const TargetProgram again = parse_target(printed, fresh, "p.tgt");
  EXPECT_EQ(again, tp);
  EXPECT_EQ(print(again, fresh), printed);
}

TEST(Formats, WordSyntax) {
  NameTable n;
  n.intern_class("C");
  n.intern_object("o");
  const Loc m = Loc::method(ClassName{0}, MethodIndex{2});
  EXPECT_EQ(print(target::Word(Ptr{m, -3}), n), "methl C 2-3");
  EXPECT_EQ(print(target::Word(Ptr{Loc::object(ObjectName{0}), 1}), n), "objl o+1");
  EXPECT_EQ(print(target::Word(Ptr{Loc::stack(ClassName{5}), 0}), n), "stackl #5+0");
  EXPECT_EQ(print(target::Word(Integer(-12)), n), "-12");
  EXPECT_EQ(print(target::encode(Instr::bnz(r_aux1, Integer(-2))), n), "Bnz r_aux1 -2");
  EXPECT_EQ(print(target::encode(Instr::eq(r_aux1, r_aux2, r_aux1)), n),
            "Eq r_aux1 r_aux2 r_aux1");
  EXPECT_EQ(print(target::encode(Instr::const_(Ptr{Loc::boot(), 4}, r_a)), n),
            "Const boot+4 r_a");

  const std::string src =
      "region methl C 2\n"
      "  methl C 2-3\n  objl o+1 x 2\n  -12\n  Bnz r_aux1 -2\n  Const boot+4 r_a\n"
      "  Const stackl #5+0 r_sp  // comment\n";
  TargetProgram p = parse_target(src, n);
  const auto& words = p.regions.at(m);
  ASSERT_EQ(words.size(), 7u);  // `x 2` repeats a word
  EXPECT_EQ(words[0], target::Word(Ptr{m, -3}));
  EXPECT_EQ(words[2], target::Word(Ptr{Loc::object(ObjectName{0}), 1}));
  EXPECT_EQ(words[3], target::Word(Integer(-12)));
  EXPECT_EQ(words[6], target::encode(Instr::const_(Ptr{Loc::stack(ClassName{5}), 0}, r_sp)));
}

TEST(Formats, TargetParseErrors) {
  NameTable n;
  auto fails = [&](const std::string& src, const std::string& part) {
    try {
      parse_target(src, n, "bad.tgt");
    } catch (const ParseError& e) {
      EXPECT_NE(std::string(e.what()).find(part), std::string::npos) << e.what();
      return;
    }
    ADD_FAILURE() << "accepted: " << src;
  };
  fails("region methl C 1\n  Frob r_a\n", "bad.tgt:2");
  fails("region methl C 1\n  Mov r_a r_zz\n", "unknown register");
  fails("region methl C 1\n  Const objl o r_a\n", "offset");
  fails("region boot\n", "boot region");
  fails("region objl o\nregion objl o\n", "duplicate region");
  fails("  Nop\n", "outside a region");
  fails("region methl C 1\n  Nop Nop\n", "bad.tgt:2");
  fails("export class C { C(C) }\nexport class C { C(C) }\n", "duplicate declaration");
}

TEST(Formats, IntermediateParseErrors) {
  NameTable n;
  EXPECT_THROW(parse_interm("compartment C\n  method 1 C(C)\n    Jump 3\n", n), ParseError);
  EXPECT_THROW(parse_interm("  This\n", n), ParseError);
}

TEST(Formats, ImageDumpCompressesRuns) {
  const auto lib = testing::library_build();
  const TargetProgram unit = compile_to_target(compile_program(lib.components[0]), 100);
  const std::string image = dump_image(tag_memory(unit), lib.symbols.names);
  EXPECT_EQ(image,
            "region objl tt\n"
            "region stackl Unit\n"
            "  0: stackl Unit+0 @ (NB,Unit,NEP,W)\n"
            "  1..100: 0 @ (NB,Unit,NEP,⊥)\n");
}

TEST(Formats, TraceLines) {
  const auto b = testing::build(testing::driver("Bool", "t"));
  auto s = boot_state(compile_to_target(compile_program(b.program), 4));
  policy::MicroPolicy pol;
  std::vector<std::string> lines;
  std::uint64_t k = 0;
  target::run(s, pol, 100, [&](const auto& st, const auto& rec, const auto& r) {
    lines.push_back(trace_line(k++, st, rec, r, b.symbols.names));
  });
  ASSERT_GE(lines.size(), 4u);
  EXPECT_EQ(lines[0], "0 boot+0 | Const objl main+0 r_tgt | depth 0->0 | const-blessed r_tgt@O Main");
  EXPECT_EQ(lines[3], "3 boot+3 | Jal r_aux3 | depth 0->0 | jal r_a@W");
  EXPECT_EQ(lines.back().substr(lines.back().size() - 6), "halted");
  EXPECT_NE(dump_registers(s, b.symbols.names).find("r_ret = objl t+0 @ O Bool"),
            std::string::npos);
}

}  // namespace
}  // namespace micropol::text

// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"

namespace micropol {
namespace {

using target::Loc;

TargetProgram compiled(const source::SourceProgram& p, std::size_t cap = 4) {
  return compile_to_target(compile_program(p), cap);
}

surface::Build main_build() {
  return testing::build(testing::driver("Bool", "t.and(f)"));
}

std::vector<int> checks(const TargetProgram& p) {
  std::vector<int> out;
  for (const auto& e : check_program(p)) out.push_back(e.check);
  return out;
}

TEST(LoaderChecks, CompleteCompiledProgramPasses) {
  EXPECT_TRUE(check_program(compiled(main_build().program)).empty());
}

TEST(LoaderChecks, ImportsMustBeResolved) {
  const auto lib = testing::library_build();
  const TargetProgram bool_only = compiled(lib.components[1]);
  EXPECT_EQ(checks(bool_only), (std::vector<int>{1, 1}));
  EXPECT_THROW(boot_state(bool_only), LinkError);
}

TEST(LoaderChecks, EveryExportedMethodHasCode) {
  const auto b = main_build();
  TargetProgram p = compiled(b.program);
  const ClassName bool_c = testing::klass(b, "Bool");
  p.regions.erase(Loc::method(bool_c, MethodIndex{2}));
  EXPECT_EQ(checks(p), std::vector<int>{2});
  p = compiled(b.program);
  p.regions.at(Loc::method(bool_c, MethodIndex{3})).clear();
  EXPECT_EQ(checks(p), std::vector<int>{2});
}

TEST(LoaderChecks, EveryExportedClassHasAStack) {
  const auto b = main_build();
  TargetProgram p = compiled(b.program);
  p.regions.erase(Loc::stack(testing::klass(b, "Unit")));
  EXPECT_EQ(checks(p), std::vector<int>{3});
}

TEST(LoaderChecks, EveryExportedObjectHasARegion) {
  const auto b = main_build();
  TargetProgram p = compiled(b.program);
  p.regions.erase(Loc::object(testing::object(b, "three")));
  EXPECT_EQ(checks(p), std::vector<int>{4});
}

TEST(LoaderChecks, NoRegionWithoutAnExport) {
  const auto b = main_build();
  TargetProgram p = compiled(b.program);
  p.regions[Loc::method(testing::klass(b, "Bool"), MethodIndex{4})] = {
      target::encode(target::Instr::halt())};
  p.regions[Loc::object(ObjectName{40})] = {};
  p.regions[Loc::stack(ClassName{40})] = {};
  EXPECT_EQ(checks(p), (std::vector<int>{5, 5, 5}));
}

TEST(LoaderChecks, PointersMustNameExportedObjects) {
  const auto b = main_build();
  TargetProgram p = compiled(b.program);
  auto& region = p.regions.at(Loc::method(kMainClass, kMainMethod));
  region.push_back(target::ptr_word(Loc::object(ObjectName{40})));
  region.push_back(target::encode(target::Instr::const_(
      target::Ptr{Loc::object(ObjectName{41}), 0}, target::RegName::r_aux1)));
  EXPECT_EQ(checks(p), (std::vector<int>{5, 5}));
  EXPECT_NE(describe(check_program(p)).find("check (5): cell"), std::string::npos);
}

TEST(LoaderLink, RegionsAreDisjointAndBootIsReserved) {
  const auto lib = testing::library_build();
  const TargetProgram unit = compiled(lib.components[0]);
  const TargetProgram boolean = compiled(lib.components[1]);
  TargetProgram both = link_target(unit, boolean);
  EXPECT_EQ(both.regions.size(), unit.regions.size() + boolean.regions.size());
  EXPECT_TRUE(is_complete(both.interface));
  EXPECT_THROW(link_target(unit, unit), LinkError);
  TargetProgram boot;
  boot.regions[Loc::boot()] = {};
  EXPECT_THROW(link_target(unit, boot), LinkError);
}

TEST(LoaderTags, BoolComponent) {
  const auto lib = testing::library_build();
  const ClassName unit = testing::klass(lib, "Unit");
  const ClassName boolean = testing::klass(lib, "Bool");
  const ObjectName t = testing::object(lib, "t");
  TaggedMemory mem = tag_memory(compiled(lib.components[1]));

  const auto& not_code = mem.at(Loc::method(boolean, MethodIndex{1}));
  ASSERT_EQ(not_code.size(), 30u);
  EXPECT_EQ(not_code[0].tag.entry, (MethodSig{unit, boolean}));
  for (std::size_t i = 1; i < not_code.size(); ++i) {
    EXPECT_FALSE(not_code[i].tag.entry) << i;
  }
  std::size_t blessed = 0;
  for (const auto& c : not_code) {
    EXPECT_EQ(c.tag.compartment, boolean);
    EXPECT_EQ(c.tag.value, ValTag::word());
    if (c.tag.bless) {
      ++blessed;
      EXPECT_EQ(*c.tag.bless, boolean);
      EXPECT_EQ(detail::blessed_object(c.word).has_value(), true);
    }
  }
  EXPECT_EQ(blessed, 3u);  // Ref t, Ref t, Ref f

  const auto& stack = mem.at(Loc::stack(boolean));
  EXPECT_EQ(stack[0].tag.value, ValTag::word());
  for (std::size_t i = 1; i < stack.size(); ++i) {
    EXPECT_EQ(stack[i].tag.value, ValTag::cleared());
  }
  EXPECT_TRUE(mem.at(Loc::object(t)).empty());
}

TEST(LoaderTags, ObjectFieldsAndStackPointerConsts) {
  const auto lib = testing::library_build();
  const ClassName nat = testing::klass(lib, "BNat4");
  TaggedMemory mem = tag_memory(compiled(lib.program));
  for (const auto& c : mem.at(Loc::object(testing::object(lib, "two")))) {
    EXPECT_EQ(c.tag, (MemTag{std::nullopt, nat, std::nullopt, ValTag::obj_ptr(nat)}));
  }
  // Const of a stack pointer is not blessed.
  const auto& add = mem.at(Loc::method(nat, MethodIndex{1}));
  EXPECT_FALSE(add[1].tag.bless);
}

TEST(LoaderBoot, BootRegionAndInitialState) {
  const auto b = main_build();
  target::TaggedMachineState s = boot_state(compiled(b.program));
  const auto& boot = s.memory.at(Loc::boot());
  ASSERT_EQ(boot.size(), 5u);
  EXPECT_EQ(boot[0].tag.bless, kMainClass);
  EXPECT_EQ(boot[1].tag.bless, kMainClass);
  for (std::size_t i = 2; i < 5; ++i) {
    EXPECT_EQ(boot[i].tag, (MemTag{std::nullopt, kMainClass, std::nullopt, ValTag::word()}));
  }
  EXPECT_EQ(s.pc, (target::Ptr{Loc::boot(), 0}));
  EXPECT_EQ(s.pc_tag, PcTag{0});
  for (const auto& r : s.registers) EXPECT_TRUE(r.tag.is_cleared());

  policy::MicroPolicy pol;
  auto r = target::run(s, pol, 10'000);
  ASSERT_TRUE(std::holds_alternative<target::Halted>(r));
  EXPECT_EQ(s.pc, (target::Ptr{Loc::boot(), 4}));
  EXPECT_EQ(halted_result(s), testing::object(b, "f"));
  EXPECT_EQ(s.pc_tag, PcTag{0});
}

TEST(LoaderBoot, MainRequirements) {
  const auto b = main_build();
  TargetProgram p = compiled(b.program);
  p.interface.exports.classes.at(kMainClass).methods[0].arg_class =
      testing::klass(b, "Bool");
  EXPECT_THROW(boot_state(p), LinkError);

  const auto lib = testing::library_build();
  EXPECT_THROW(boot_state(compiled(lib.program)), LinkError);
}

TEST(LoaderBoot, HaltInsideAMethodReturnsTheStackTop) {
  auto b = testing::build(testing::driver("Bool", "this.bail(t); t", "Bool bail(Bool)",
                                          "  Bool bail(Bool) { exit arg.not(tt) }\n"));
  target::TaggedMachineState s =
      boot_state(compiled(b.program, kDefaultStackCapacity));
  policy::MicroPolicy pol;
  ASSERT_TRUE(std::holds_alternative<target::Halted>(target::run(s, pol, 10'000)));
  EXPECT_EQ(s.pc.loc, Loc::method(kMainClass, MethodIndex{2}));
  EXPECT_EQ(halted_result(s), testing::object(b, "f"));
}

// The tagged image of the compiled Bool component, frozen.
TEST(LoaderGolden, BoolImage) {
  const auto lib = testing::library_build();
  const std::string image =
      text::dump_image(tag_memory(compile_to_target(compile_program(lib.components[1]))),
                       lib.symbols.names);
  EXPECT_EQ(image, testing::read_data(testing::golden_dir() / "bool_image.txt"));
}

}  // namespace
}  // namespace micropol

// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "support.hpp"

namespace micropol::policy {
namespace {

using target::Instr;
using target::Integer;
using enum target::RegName;

constexpr ClassName kHere{1}, kThere{2}, kArgC{3}, kResC{4};

MemTag cell(ClassName comp, EntryTag entry = std::nullopt,
            BlessTag bless = std::nullopt, ValTag value = ValTag::word()) {
  return {bless, comp, entry, value};
}

// Step inside compartment kHere at depth 3, every register tagged W.
MonitorInput input(Instr i, ClassName next = kHere) {
  MonitorInput in{std::move(i), PcTag{3}, cell(kHere), cell(next), std::nullopt, {}};
  in.regs.fill(ValTag::word());
  return in;
}

void set(MonitorInput& in, target::RegName r, ValTag t) {
  in.regs[static_cast<std::size_t>(r)] = t;
}

Allow allowed(const MonitorDecision& d) {
  if (const auto* deny = std::get_if<Deny>(&d)) {
    ADD_FAILURE() << "denied: " << deny->detail;
    return {};
  }
  return std::get<Allow>(d);
}

std::string denied(const MonitorDecision& d) {
  if (const auto* deny = std::get_if<Deny>(&d)) return deny->detail;
  return "<allowed>";
}

using Writes = std::vector<std::pair<target::RegName, ValTag>>;

// ---------------------------------------------------------------------------
// Rules that fire

TEST(MicroPolicy, NopAndBnz) {
  for (const Instr& i : {Instr::nop(), Instr::bnz(r_aux1, Integer(2))}) {
    const Allow a = allowed(transfer(input(i)));
    EXPECT_EQ(a.rule, kNopOrBnz);
    EXPECT_EQ(a.pc, PcTag{3});
    EXPECT_TRUE(a.reg_writes.empty());
    EXPECT_FALSE(a.mem_write);
  }
}

TEST(MicroPolicy, ConstTagsAWordOrABlessedPointer) {
  MonitorInput in = input(Instr::const_(Integer(1), r_aux1));
  set(in, r_aux1, ValTag::ret_cap(0, kResC));
  const Allow plain = allowed(transfer(in));
  EXPECT_EQ(plain.rule, kConst);
  EXPECT_EQ(plain.reg_writes, (Writes{{r_aux1, ValTag::word()}}));

  in.ci.bless = kThere;
  const Allow blessed = allowed(transfer(in));
  EXPECT_EQ(blessed.rule, kConstBlessed);
  EXPECT_EQ(blessed.reg_writes, (Writes{{r_aux1, ValTag::obj_ptr(kThere)}}));
}

TEST(MicroPolicy, MovMovesCapabilitiesAndCopiesOtherTags) {
  MonitorInput in = input(Instr::mov(r_aux1, r_aux2));
  set(in, r_aux1, ValTag::ret_cap(2, kResC));
  const Allow a = allowed(transfer(in));
  EXPECT_EQ(a.rule, kMov);
  EXPECT_EQ(a.reg_writes,
            (Writes{{r_aux2, ValTag::ret_cap(2, kResC)}, {r_aux1, ValTag::cleared()}}));

  set(in, r_aux1, ValTag::obj_ptr(kThere));
  EXPECT_EQ(allowed(transfer(in)).reg_writes,
            (Writes{{r_aux2, ValTag::obj_ptr(kThere)}, {r_aux1, ValTag::obj_ptr(kThere)}}));

  // Mov r r with a capability ends cleared: the capability is not duplicated.
  MonitorInput self = input(Instr::mov(r_a, r_a));
  set(self, r_a, ValTag::ret_cap(2, kResC));
  const Allow s = allowed(transfer(self));
  ASSERT_EQ(s.reg_writes.size(), 2u);
  EXPECT_EQ(s.reg_writes.back(), (std::pair{r_a, ValTag::cleared()}));
}

TEST(MicroPolicy, BinopYieldsAWord) {
  MonitorInput in = input(Instr::eq(r_aux1, r_aux2, r_aux3));
  set(in, r_aux1, ValTag::obj_ptr(kThere));
  set(in, r_aux2, ValTag::obj_ptr(kThere));
  const Allow a = allowed(transfer(in));
  EXPECT_EQ(a.rule, kBinop);
  EXPECT_EQ(a.reg_writes, (Writes{{r_aux3, ValTag::word()}}));
}

TEST(MicroPolicy, LoadMovesTheCellTagOut) {
  MonitorInput in = input(Instr::load(r_sp, r_a));
  in.mem = cell(kHere, std::nullopt, std::nullopt, ValTag::ret_cap(2, kResC));
  const Allow a = allowed(transfer(in));
  EXPECT_EQ(a.rule, kLoad);
  EXPECT_EQ(a.reg_writes, (Writes{{r_a, ValTag::ret_cap(2, kResC)}}));
  ASSERT_TRUE(a.mem_write);
  EXPECT_EQ(a.mem_write->value, ValTag::cleared());
  EXPECT_EQ(a.mem_write->compartment, kHere);

  in.mem = cell(kHere, std::nullopt, std::nullopt, ValTag::obj_ptr(kThere));
  const Allow b = allowed(transfer(in));
  EXPECT_EQ(b.mem_write->value, ValTag::obj_ptr(kThere));
}

TEST(MicroPolicy, StoreMovesTheRegisterTagIn) {
  MonitorInput in = input(Instr::store(r_sp, r_a));
  set(in, r_a, ValTag::ret_cap(2, kResC));
  MethodSig entry{kArgC, kResC};
  in.mem = cell(kHere, entry, kThere, ValTag::word());
  const Allow a = allowed(transfer(in));
  EXPECT_EQ(a.rule, kStore);
  EXPECT_EQ(a.reg_writes, (Writes{{r_a, ValTag::cleared()}}));
  ASSERT_TRUE(a.mem_write);
  // The blessing is dropped, the entry tag and compartment are kept.
  EXPECT_EQ(*a.mem_write, (MemTag{std::nullopt, kHere, entry, ValTag::ret_cap(2, kResC)}));
}

TEST(MicroPolicy, InternalJumpAndJal) {
  const Allow j = allowed(transfer(input(Instr::jump(r_aux1))));
  EXPECT_EQ(j.rule, kJumpInternal);
  EXPECT_EQ(j.pc, PcTag{3});
  const Allow c = allowed(transfer(input(Instr::jal(r_aux1))));
  EXPECT_EQ(c.rule, kJalInternal);
  EXPECT_EQ(c.reg_writes, (Writes{{r_a, ValTag::word()}}));
  EXPECT_EQ(c.pc, PcTag{3});
}

MonitorInput cross_call() {
  MonitorInput in = input(Instr::jal(r_aux3), kThere);
  in.ni->entry = MethodSig{kArgC, kResC};
  set(in, r_tgt, ValTag::obj_ptr(kThere));
  set(in, r_arg, ValTag::obj_ptr(kArgC));
  return in;
}

TEST(MicroPolicy, CrossCompartmentCallMintsACapability) {
  const Allow a = allowed(transfer(cross_call()));
  EXPECT_EQ(a.rule, kJalCall);
  EXPECT_EQ(a.pc, PcTag{4});
  EXPECT_EQ(a.reg_writes, (Writes{{r_a, ValTag::ret_cap(3, kResC)},
                                  {r_ret, ValTag::cleared()},
                                  {r_spp, ValTag::cleared()},
                                  {r_sp, ValTag::cleared()}}));
}

MonitorInput cross_return() {
  MonitorInput in = input(Instr::jump(r_a), kThere);
  set(in, r_a, ValTag::ret_cap(2, kResC));
  set(in, r_ret, ValTag::obj_ptr(kResC));
  return in;
}

TEST(MicroPolicy, CrossCompartmentReturnConsumesTheCapability) {
  const Allow a = allowed(transfer(cross_return()));
  EXPECT_EQ(a.rule, kJumpReturn);
  EXPECT_EQ(a.pc, PcTag{2});
  const ValTag bot = ValTag::cleared();
  EXPECT_EQ(a.reg_writes, (Writes{{r_a, bot}, {r_aux1, bot}, {r_aux2, bot},
                                  {r_aux3, bot}, {r_sp, bot}}));
}

TEST(MicroPolicy, HaltIsAlwaysAllowed) {
  MonitorInput in = input(Instr::halt());
  in.ni.reset();
  in.ci.value = ValTag::cleared();
  const Allow a = allowed(transfer(in));
  EXPECT_EQ(a.rule, 0);
}

// ---------------------------------------------------------------------------
// Denials

TEST(MicroPolicyDeny, InstructionCells) {
  MonitorInput in = input(Instr::nop());
  in.ci.value = ValTag::cleared();
  EXPECT_EQ(denied(transfer(in)), "instruction-cell-not-word");
  in = input(Instr::nop());
  in.ci.bless = kThere;
  EXPECT_EQ(denied(transfer(in)), "blessed-non-const");
  in = input(Instr::nop());
  in.ni.reset();
  EXPECT_EQ(denied(transfer(in)), "no-next-instruction");
}

TEST(MicroPolicyDeny, OnlyJumpAndJalCrossCompartments) {
  const std::pair<Instr, const char*> cases[] = {
      {Instr::nop(), "nop-cross"},
      {Instr::bnz(r_aux1, Integer(0)), "bnz-cross"},
      {Instr::const_(Integer(0), r_aux1), "const-cross"},
      {Instr::mov(r_aux1, r_aux2), "mov-cross"},
      {Instr::add(r_aux1, r_aux2, r_aux3), "binop-cross"},
      {Instr::load(r_aux1, r_aux2), "load-cross"},
      {Instr::store(r_aux1, r_aux2), "store-cross"},
  };
  for (const auto& [i, why] : cases) {
    MonitorInput in = input(i, kThere);
    in.mem = cell(kHere);
    EXPECT_EQ(denied(transfer(in)), why);
  }
}

TEST(MicroPolicyDeny, OperandTags) {
  MonitorInput in = input(Instr::bnz(r_aux1, Integer(0)));
  set(in, r_aux1, ValTag::obj_ptr(kThere));
  EXPECT_EQ(denied(transfer(in)), "bnz-tag");

  in = input(Instr::add(r_aux1, r_aux2, r_aux3));
  set(in, r_aux2, ValTag::ret_cap(0, kResC));
  EXPECT_EQ(denied(transfer(in)), "binop-operand");
  set(in, r_aux2, ValTag::cleared());
  EXPECT_EQ(denied(transfer(in)), "binop-operand");

  in = input(Instr::load(r_aux1, r_aux2));
  in.mem = cell(kHere);
  set(in, r_aux1, ValTag::obj_ptr(kHere));
  EXPECT_EQ(denied(transfer(in)), "load-pointer-tag");

  in = input(Instr::store(r_aux1, r_aux2));
  in.mem = cell(kHere);
  set(in, r_aux1, ValTag::cleared());
  EXPECT_EQ(denied(transfer(in)), "store-pointer-tag");

  in = input(Instr::jump(r_aux1));
  set(in, r_aux1, ValTag::ret_cap(2, kResC));
  EXPECT_EQ(denied(transfer(in)), "jump-internal-tag");

  in = input(Instr::jal(r_aux1));
  set(in, r_aux1, ValTag::obj_ptr(kHere));
  EXPECT_EQ(denied(transfer(in)), "jal-pointer-tag");
}

TEST(MicroPolicyDeny, ForeignCells) {
  MonitorInput in = input(Instr::load(r_aux1, r_aux2));
  in.mem = cell(kThere);
  EXPECT_EQ(denied(transfer(in)), "load-foreign-cell");
  in = input(Instr::store(r_aux1, r_aux2));
  in.mem = cell(kThere);
  EXPECT_EQ(denied(transfer(in)), "store-foreign-cell");
}

TEST(MicroPolicyDeny, Returns) {
  MonitorInput in = cross_return();
  set(in, r_a, ValTag::cleared());
  EXPECT_EQ(denied(transfer(in)), "jump-cleared-capability");
  set(in, r_a, ValTag::word());
  EXPECT_EQ(denied(transfer(in)), "jump-no-capability");
  set(in, r_a, ValTag::obj_ptr(kResC));
  EXPECT_EQ(denied(transfer(in)), "jump-no-capability");
  set(in, r_a, ValTag::ret_cap(1, kResC));
  EXPECT_EQ(denied(transfer(in)), "jump-depth");
  set(in, r_a, ValTag::ret_cap(3, kResC));
  EXPECT_EQ(denied(transfer(in)), "jump-depth");
  in = cross_return();
  in.pc = PcTag{0};
  set(in, r_a, ValTag::ret_cap(0, kResC));
  EXPECT_EQ(denied(transfer(in)), "jump-depth");

  in = cross_return();
  set(in, r_ret, ValTag::obj_ptr(kArgC));
  EXPECT_EQ(denied(transfer(in)), "jump-ret-type");
  set(in, r_ret, ValTag::word());
  EXPECT_EQ(denied(transfer(in)), "jump-ret-type");
}

TEST(MicroPolicyDeny, Calls) {
  MonitorInput in = cross_call();
  in.ni->entry.reset();
  EXPECT_EQ(denied(transfer(in)), "jal-non-entry");

  in = cross_call();
  set(in, r_tgt, ValTag::obj_ptr(kHere));
  EXPECT_EQ(denied(transfer(in)), "jal-target-type");
  set(in, r_tgt, ValTag::word());
  EXPECT_EQ(denied(transfer(in)), "jal-target-type");

  in = cross_call();
  set(in, r_arg, ValTag::obj_ptr(kResC));
  EXPECT_EQ(denied(transfer(in)), "jal-arg-type");
  set(in, r_arg, ValTag::cleared());
  EXPECT_EQ(denied(transfer(in)), "jal-arg-type");
}

TEST(MicroPolicy, HitCounters) {
  MicroPolicy p;
  p(input(Instr::nop()));
  p(input(Instr::nop()));
  p(cross_call());
  p(input(Instr::nop(), kThere));  // denied: not counted
  EXPECT_EQ(p.hits(kNopOrBnz), 2u);
  EXPECT_EQ(p.hits(kJalCall), 1u);
  MicroPolicy q;
  q(input(Instr::nop()));
  p.merge(q);
  EXPECT_EQ(p.hits(kNopOrBnz), 3u);
  EXPECT_STREQ(rule_name(kJumpReturn), "jump-return");
}

}  // namespace
}  // namespace micropol::policy

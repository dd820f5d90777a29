// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Surface text of the standard encodings of unit, booleans and bounded
// naturals. The corpus keeps byte-identical copies under corpus/lib.

#pragma once

#include <string_view>

namespace micropol::library {

inline constexpr std::string_view kUnit = R"(// The unit type: one object, no fields, no methods.
export obj decl tt : Unit
export class decl Unit { }

obj tt : Unit { }
class Unit { }
)";

inline constexpr std::string_view kBool = R"(// Booleans as two distinguished objects.
import obj decl tt : Unit
import class decl Unit { }

export obj decl t, f : Bool
export class decl Bool {
  Bool not(Unit),
  Bool and(Bool),
  Bool or(Bool)
}

obj t : Bool { }
obj f : Bool { }
class Bool {
  Bool not(Unit) { this == t ? f : t }
  Bool and(Bool) { this == t ? arg : f }
  Bool or(Bool) { this == t ? t : arg }
}
)";

inline constexpr std::string_view kBNat4 = R"(// Naturals bounded by three; successor and predecessor saturate.
export obj decl zero, one, two, three : BNat4
export class decl BNat4 {
  BNat4 add(BNat4),
  BNat4 mul(BNat4 arg)
}

obj zero  : BNat4 { zero, one }
obj one   : BNat4 { zero, two }
obj two   : BNat4 { one,  three }
obj three : BNat4 { two,  three }
class BNat4 {
  BNat4 pred, succ;

  BNat4 add(BNat4) {
    arg == zero ?
      this : this.succ.add(arg.pred)
  }

  BNat4 mul(BNat4) {
    arg == zero ?
      zero : this.mul(arg.pred).add(this)
  }
}
)";

}  // namespace micropol::library

// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "micropol/common.hpp"
#include "micropol/interfaces.hpp"

namespace micropol {

/// Current call depth.
struct PcTag {
  std::uint64_t depth = 0;
  friend bool operator==(const PcTag&, const PcTag&) = default;
};

/// Tag on a register or on the content of a memory cell.
class ValTag {
 public:
  enum class Kind : std::uint8_t { kCleared, kRetCap, kObjPtr, kWord };

  ValTag() : ValTag(Kind::kCleared, 0, {}) {}

  static ValTag cleared() { return ValTag(Kind::kCleared, 0, {}); }
  static ValTag word() { return ValTag(Kind::kWord, 0, {}); }
  static ValTag obj_ptr(ClassName c) { return ValTag(Kind::kObjPtr, 0, c); }
  /// Capability for returning to call depth `depth` with a result of class
  /// `result`.
  static ValTag ret_cap(std::uint64_t depth, ClassName result) {
    return ValTag(Kind::kRetCap, depth, result);
  }

  Kind kind() const { return kind_; }
  bool is_cleared() const { return kind_ == Kind::kCleared; }
  bool is_word() const { return kind_ == Kind::kWord; }
  bool is_obj_ptr() const { return kind_ == Kind::kObjPtr; }
  bool is_ret_cap() const { return kind_ == Kind::kRetCap; }
  std::uint64_t depth() const { return depth_; }
  ClassName cls() const { return cls_; }

  friend bool operator==(const ValTag& a, const ValTag& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
      case Kind::kRetCap:
        return a.depth_ == b.depth_ && a.cls_ == b.cls_;
      case Kind::kObjPtr:
        return a.cls_ == b.cls_;
      default:
        return true;
    }
  }

 private:
  ValTag(Kind k, std::uint64_t d, ClassName c) : kind_(k), depth_(d), cls_(c) {}

  Kind kind_;
  std::uint64_t depth_;
  ClassName cls_;
};

/// Blessing: a Const cell that yields an object pointer of class `*blessed`.
using BlessTag = std::optional<ClassName>;

/// Entry point of a method with signature `*entry`, or not an entry point.
using EntryTag = std::optional<MethodSig>;

struct MemTag {
  BlessTag bless;
  ClassName compartment;
  EntryTag entry;
  ValTag value = ValTag::word();
  friend bool operator==(const MemTag&, const MemTag&) = default;
};

/// Return capabilities are destroyed; every other tag is kept.
inline ValTag clear(const ValTag& t) {
  return t.is_ret_cap() ? ValTag::cleared() : t;
}

// Pretty-printers. Output strings are stable; golden files depend on them.

inline std::string to_string(const PcTag& t) { return std::to_string(t.depth); }

inline std::string to_string(const ValTag& t, const NameTable& names) {
  switch (t.kind()) {
    case ValTag::Kind::kCleared:
      return "⊥";
    case ValTag::Kind::kWord:
      return "W";
    case ValTag::Kind::kObjPtr:
      return "O " + names.class_name(t.cls());
    case ValTag::Kind::kRetCap:
      return "Ret " + std::to_string(t.depth()) + " " +
             names.class_name(t.cls());
  }
  return "?";
}

inline std::string to_string(const BlessTag& b, const NameTable& names) {
  return b ? "B " + names.class_name(*b) : "NB";
}

inline std::string to_string(const EntryTag& e, const NameTable& names) {
  return e ? "EP " + names.class_name(e->arg_class) + "->" +
                 names.class_name(e->result_class)
           : "NEP";
}

inline std::string to_string(const MemTag& t, const NameTable& names) {
  return "(" + to_string(t.bless, names) + "," +
         names.class_name(t.compartment) + "," + to_string(t.entry, names) +
         "," + to_string(t.value, names) + ")";
}

}  // namespace micropol

// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace micropol {

/// Global class name. Any natural number is a legal name.
struct ClassName {
  std::uint64_t value = 0;
  friend auto operator<=>(const ClassName&, const ClassName&) = default;
};

/// Global object name.
struct ObjectName {
  std::uint64_t value = 0;
  friend auto operator<=>(const ObjectName&, const ObjectName&) = default;
};

/// Class-wise method index; the methods of a class are numbered 1..k.
struct MethodIndex {
  std::uint64_t value = 1;
  friend auto operator<=>(const MethodIndex&, const MethodIndex&) = default;
};

/// Class-wise field index, 1-based like methods.
struct FieldIndex {
  std::uint64_t value = 1;
  friend auto operator<=>(const FieldIndex&, const FieldIndex&) = default;
};

/// The program entry point: the first method of class 0, run with object 0
/// as both the current object and the argument.
inline constexpr ClassName kMainClass{0};
inline constexpr MethodIndex kMainMethod{1};
inline constexpr ObjectName kMainObject{0};

// Error categories map onto CLI exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lexical, syntactic, scoping and typing failures.
class ParseError : public Error {
 public:
  using Error::Error;
};

class TypeError : public Error {
 public:
  using Error::Error;
};

/// Interface incompatibility, duplicate regions, failed loader checks.
class LinkError : public Error {
 public:
  using Error::Error;
};

/// Maps numeric class/object names to the identifiers used in surface text.
///
/// Names are assigned by first occurrence. Unknown numbers print as `#n`,
/// which the text parsers accept back as a raw number.
class NameTable {
 public:
  ClassName intern_class(const std::string& id) {
    return ClassName{intern(id, class_ids_, class_names_)};
  }
  ObjectName intern_object(const std::string& id) {
    return ObjectName{intern(id, object_ids_, object_names_)};
  }

  std::optional<ClassName> find_class(const std::string& id) const {
    if (auto raw = parse_raw(id)) return ClassName{*raw};
    auto it = class_ids_.find(id);
    if (it == class_ids_.end()) return std::nullopt;
    return ClassName{it->second};
  }
  std::optional<ObjectName> find_object(const std::string& id) const {
    if (auto raw = parse_raw(id)) return ObjectName{*raw};
    auto it = object_ids_.find(id);
    if (it == object_ids_.end()) return std::nullopt;
    return ObjectName{it->second};
  }

  std::string class_name(ClassName c) const {
    return name_of(c.value, class_names_);
  }
  std::string object_name(ObjectName o) const {
    return name_of(o.value, object_names_);
  }

  std::size_t class_count() const { return class_names_.size(); }
  std::size_t object_count() const { return object_names_.size(); }

 private:
  static std::optional<std::uint64_t> parse_raw(const std::string& id) {
    if (id.size() < 2 || id[0] != '#') return std::nullopt;
    std::uint64_t v = 0;
    for (std::size_t i = 1; i < id.size(); ++i) {
      if (id[i] < '0' || id[i] > '9') return std::nullopt;
      v = v * 10 + static_cast<std::uint64_t>(id[i] - '0');
    }
    return v;
  }

  static std::uint64_t intern(const std::string& id,
                              std::map<std::string, std::uint64_t>& ids,
                              std::vector<std::string>& names) {
    if (auto raw = parse_raw(id)) return *raw;
    auto [it, inserted] = ids.try_emplace(id, names.size());
    if (inserted) names.push_back(id);
    return it->second;
  }

  static std::string name_of(std::uint64_t v,
                             const std::vector<std::string>& names) {
    if (v < names.size()) return names[v];
    return "#" + std::to_string(v);
  }

  std::map<std::string, std::uint64_t> class_ids_;
  std::map<std::string, std::uint64_t> object_ids_;
  std::vector<std::string> class_names_;
  std::vector<std::string> object_names_;
};

}  // namespace micropol

template <>
struct std::hash<micropol::ClassName> {
  std::size_t operator()(const micropol::ClassName& c) const noexcept {
    return std::hash<std::uint64_t>{}(c.value);
  }
};

template <>
struct std::hash<micropol::ObjectName> {
  std::size_t operator()(const micropol::ObjectName& o) const noexcept {
    return std::hash<std::uint64_t>{}(o.value);
  }
};

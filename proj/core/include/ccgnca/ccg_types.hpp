// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ccgnca::ccg {

/// Immutable directional category: an atom, X/Y (seeks Y on the right) or
/// X\Y (seeks Y on the left). Cheap to copy.
class Category {
 public:
  enum class Kind { atom, forward, backward };

  Category() : Category(atom("?")) {}

  static Category atom(std::string name);
  static Category forward(Category result, Category argument);
  static Category backward(Category result, Category argument);
  /// Parses e.g. "((S\NP)/PP)/NP". Slashes associate to the left.
  static Category parse(std::string_view text);

  Kind kind() const;
  bool is_atom() const { return kind() == Kind::atom; }
  bool is_atom(std::string_view name) const;
  const std::string& atom_name() const;
  const Category& result() const;
  const Category& argument() const;

  /// Canonical text form; equality and hashing go through it.
  const std::string& str() const;

  bool operator==(const Category& o) const { return str() == o.str(); }

 private:
  struct Node;
  explicit Category(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

enum class StructureKind { atomic, forward, backward, special };

/// Argument-role annotation of a lexical type. `forward` lists the roles of
/// forward arguments in application order; "pp" defers to the preposition.
struct RoleFrame {
  std::string subject;
  std::vector<std::string> forward;
  std::string gap;  // role of the extracted argument (TV_GAP)
  bool transparent = false;

  bool is_verbal() const { return !subject.empty() || !forward.empty(); }
  std::string render() const;
  static RoleFrame parse(std::string_view text);
};

struct CCGType {
  int id = 0;
  std::string name;
  Category category;
  RoleFrame roles;
  bool extension = false;  // WH, RC_THAT, TV_GAP, S_GAP
  bool empty = false;      // the collapse symbol

  StructureKind structure() const;
};

inline constexpr std::string_view kEmptySymbol = "\xE2\x88\x85";  // U+2205

/// The lexical type inventory plus the collapse symbol. Ids are stable and
/// part of the checkpoint contract.
class TypeTable {
 public:
  /// Twenty base types, four extension types and EMPTY.
  static TypeTable default_table();
  /// One type per line: id<TAB>name<TAB>structure[<TAB>roles]. '#' comments.
  static TypeTable parse(std::string_view text);
  static TypeTable load(const std::filesystem::path& path);

  std::string render() const;
  std::uint64_t hash() const;

  int size() const { return static_cast<int>(types_.size()); }
  const CCGType& at(int id) const;
  int id_of(std::string_view name) const;
  std::optional<int> find(std::string_view name) const;
  int empty_id() const { return empty_id_; }
  /// First non-empty type whose structure equals `cat`.
  std::optional<int> class_of(const Category& cat) const;
  const std::vector<CCGType>& types() const { return types_; }

  int base_count() const;
  int extension_count() const;

 private:
  std::vector<CCGType> types_;
  int empty_id_ = -1;
};

}  // namespace ccgnca::ccg

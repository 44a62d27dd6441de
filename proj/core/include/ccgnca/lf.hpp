// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
//
// Logical forms in the COGS/SLOG surface notation, e.g.
//
//   * cake ( x _ 3 ) ; eat . agent ( x _ 1 , Emma ) AND eat . theme ( x _ 1 , x _ 3 )
//
// Variables bind to sentence tokens by subscript (x _ i is token i). Proper
// names appear as constants, a wh-filler may appear as the constant `?`, and
// primitive examples use LAMBDA-bound variables.
#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ccgnca::lf {

enum class TermKind { unary_noun, role, event_predicate };

struct Arg {
  enum class Kind { variable, constant, lambda, wh };
  Kind kind = Kind::variable;
  int index = -1;    // variable subscript
  std::string name;  // constant or lambda name

  static Arg variable(int i) { return {Kind::variable, i, {}}; }
  static Arg constant(std::string n) { return {Kind::constant, -1, std::move(n)}; }
  static Arg lambda(std::string n) { return {Kind::lambda, -1, std::move(n)}; }
  static Arg wh() { return {Kind::wh, -1, "?"}; }

  bool operator==(const Arg&) const = default;
};

struct Term {
  std::string predicate;
  TermKind kind = TermKind::unary_noun;
  std::string role_name;  // empty for unary terms; "nmod.<prep>" for noun modifiers
  std::vector<Arg> args;

  bool operator==(const Term&) const = default;
};

struct LogicalForm {
  std::vector<Term> terms;
  std::set<int> variables;
  std::set<int> definite_markers;
  std::vector<std::string> lambda_vars;
};

/// Throws SyntaxError or UnknownRole. Never returns a partial form.
LogicalForm parse_lf(std::string_view text);

/// Canonical surface rendering; parse_lf(render(lf)) has the same edge set.
std::string render(const LogicalForm& lf);

bool is_known_role(std::string_view role);
bool is_wh_word(std::string_view token);

struct Edge {
  int head = 0;
  std::string role;
  int dependent = 0;

  auto operator<=>(const Edge&) const = default;
};

struct EdgeSet {
  std::vector<Edge> edges;  // sorted by (head, role, dependent), unique
  std::vector<std::string> token_lemmas;
  std::vector<bool> definite;  // per-token attribute; never compared

  void canonicalize();
  bool operator==(const EdgeSet& other) const { return edges == other.edges; }
};

/// Explicit variable -> token map; the default is the identity.
using VariableAlignment = std::map<int, int>;

/// Token position bound to `arg`, or nullopt for LAMBDA variables.
/// Throws AlignmentError when the argument cannot be placed in the sentence.
/// `head` is used only to choose between repeated proper names.
std::optional<int> resolve_arg(const Arg& arg, std::span<const std::string> tokens,
                               const VariableAlignment* alignment = nullptr,
                               std::optional<int> head = std::nullopt);

EdgeSet lf_to_edges(const LogicalForm& lf, std::span<const std::string> tokens,
                    const VariableAlignment* alignment = nullptr);

/// Reformatted exact match: equal edge sets after canonical ordering.
bool normalize_for_reformatted_match(const EdgeSet& a, const EdgeSet& b);

/// Whitespace tokenisation (benchmark convention).
std::vector<std::string> split_tokens(std::string_view sentence);

std::string to_lower(std::string_view s);

}  // namespace ccgnca::lf

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccgnca/ccg_types.hpp"
#include "ccgnca/lexicon.hpp"
#include "ccgnca/lf.hpp"

namespace ccgnca::ccg {

enum class Rule { lex, fwd_app, bwd_app, wh_merge, rc_merge };
enum class HeadChild { none, left, right };

std::string_view rule_name(Rule r);

/// A content token and its position in the original sentence.
struct ContentToken {
  std::string text;
  int position = 0;

  bool operator==(const ContentToken&) const = default;
};

struct DerivNode {
  int begin = 0;  // content span [begin, end)
  int end = 0;
  Category category;
  Rule rule = Rule::lex;
  int left = -1;  // node indices; -1 for leaves
  int right = -1;
  HeadChild head_child = HeadChild::none;
  int type_id = -1;       // lexical type id at leaves
  bool modified = false;  // NP built by NP + NP\NP
};

/// Binary derivation tree. Nodes are stored children-before-parents, so
/// the root is the last node.
struct Derivation {
  std::vector<DerivNode> nodes;
  int root_type = -1;  // type-table class of the root category

  int root() const { return static_cast<int>(nodes.size()) - 1; }
  const DerivNode& root_node() const { return nodes.back(); }
  int length() const { return nodes.empty() ? 0 : root_node().end; }
  /// Content position reached by following head children from the root.
  int head_leaf() const;
  /// Leaf node index per content position.
  std::vector<int> leaves() const;
};

/// Result category of `rule` on (left, right), or nullopt when it does not
/// apply. Pure category arithmetic; the attachment constraint lives in the
/// chart.
std::optional<Category> apply_rule(Rule rule, const Category& left, const Category& right);

HeadChild head_child_for(Rule rule, const Category& left, const Category& right);

struct ChartSummary {
  std::uint64_t derivations = 0;  // saturates at UINT64_MAX
  std::vector<std::string> root_categories;
};

/// Counts complete derivations without building trees.
ChartSummary chart_summary(std::span<const int> types, const TypeTable& table);

/// Deterministic CKY over lexical type ids. When several derivations exist
/// they must agree on root category and extracted edges, else
/// AmbiguousParse. `tokens` is used only for that edge comparison;
/// positional placeholders stand in when it is empty.
Derivation cky_parse(std::span<const int> types, const TypeTable& table,
                     std::span<const ContentToken> tokens = {}, const Lexicon& lexicon = {});

/// Semantic edges read off a derivation. Edge indices are original token
/// positions. Throws RoleExhausted.
lf::EdgeSet extract_edges(const Derivation& derivation, std::span<const ContentToken> tokens,
                          const TypeTable& table, const Lexicon& lexicon = {});

}  // namespace ccgnca::ccg

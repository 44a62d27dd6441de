// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#include <algorithm>
#include <limits>

#include "ccgnca/derivation.hpp"
#include "ccgnca/error.hpp"

namespace ccgnca::ccg {

namespace {

constexpr Rule kRules[] = {Rule::fwd_app, Rule::bwd_app, Rule::wh_merge, Rule::rc_merge};
constexpr std::size_t kEnumerationCap = 256;

bool is_np_modifier(const Category& c) {
  return c.kind() == Category::Kind::backward && c.result().is_atom("NP") && c.argument().is_atom("NP");
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

struct Back {
  Rule rule;
  int split;
  int left;
  int right;
};

struct Entry {
  Category cat;
  bool modified = false;
  int type_id = -1;
  std::uint64_t count = 0;
  std::vector<Back> backs;
};

class Chart {
 public:
  Chart(std::span<const int> types, const TypeTable& table) : n_(static_cast<int>(types.size())) {
    cells_.resize(static_cast<std::size_t>(n_) * (n_ + 1));
    for (int i = 0; i < n_; ++i) {
      Entry e;
      e.cat = table.at(types[i]).category;
      e.type_id = types[i];
      e.count = 1;
      cell(i, i + 1).push_back(std::move(e));
    }
    for (int width = 2; width <= n_; ++width) {
      for (int i = 0; i + width <= n_; ++i) fill(i, i + width);
    }
  }

  std::vector<Entry>& cell(int i, int j) { return cells_[static_cast<std::size_t>(i) * (n_ + 1) + j]; }
  int size() const { return n_; }

  using Tree = std::vector<DerivNode>;

  /// Up to kEnumerationCap trees for one entry; root last.
  std::vector<Tree> enumerate(int i, int j, int idx) {
    const Entry& e = cell(i, j)[idx];
    std::vector<Tree> out;
    if (e.backs.empty()) {
      DerivNode leaf;
      leaf.begin = i;
      leaf.end = j;
      leaf.category = e.cat;
      leaf.type_id = e.type_id;
      out.push_back({leaf});
      return out;
    }
    for (const Back& b : e.backs) {
      const auto lefts = enumerate(i, b.split, b.left);
      const auto rights = enumerate(b.split, j, b.right);
      for (const auto& lt : lefts) {
        for (const auto& rt : rights) {
          if (out.size() >= kEnumerationCap) return out;
          Tree t = lt;
          const int offset = static_cast<int>(t.size());
          for (DerivNode node : rt) {
            if (node.left >= 0) node.left += offset;
            if (node.right >= 0) node.right += offset;
            t.push_back(std::move(node));
          }
          DerivNode parent;
          parent.begin = i;
          parent.end = j;
          parent.category = e.cat;
          parent.rule = b.rule;
          parent.left = offset - 1;
          parent.right = static_cast<int>(t.size()) - 1;
          parent.head_child = head_child_for(b.rule, lt.back().category, rt.back().category);
          parent.modified = e.modified;
          t.push_back(std::move(parent));
          out.push_back(std::move(t));
        }
      }
    }
    return out;
  }

 private:
  void fill(int i, int j) {
    auto& target = cell(i, j);
    for (int k = i + 1; k < j; ++k) {
      const auto& ls = cell(i, k);
      const auto& rs = cell(k, j);
      for (int a = 0; a < static_cast<int>(ls.size()); ++a) {
        for (int b = 0; b < static_cast<int>(rs.size()); ++b) {
          for (Rule rule : kRules) {
            auto res = apply_rule(rule, ls[a].cat, rs[b].cat);
            if (!res) continue;
            bool modified = false;
            if (rule == Rule::bwd_app && is_np_modifier(rs[b].cat)) {
              // Low attachment: a modified NP takes no further modifier.
              if (ls[a].modified) continue;
              modified = true;
            }
            auto it = std::find_if(target.begin(), target.end(),
                                   [&](const Entry& e) { return e.modified == modified && e.cat == *res; });
            if (it == target.end()) {
              Entry e;
              e.cat = *res;
              e.modified = modified;
              target.push_back(std::move(e));
              it = target.end() - 1;
            }
            it->count = sat_add(it->count, sat_mul(ls[a].count, rs[b].count));
            it->backs.push_back({rule, k, a, b});
          }
        }
      }
    }
  }

  int n_;
  std::vector<std::vector<Entry>> cells_;
};

std::vector<ContentToken> placeholders(int n) {
  std::vector<ContentToken> out;
  for (int i = 0; i < n; ++i) out.push_back({"w" + std::to_string(i), i});
  return out;
}

}  // namespace

std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::lex:
      return "LEX";
    case Rule::fwd_app:
      return "FWD_APP";
    case Rule::bwd_app:
      return "BWD_APP";
    case Rule::wh_merge:
      return "WH_MERGE";
    case Rule::rc_merge:
      return "RC_MERGE";
  }
  return "?";
}

int Derivation::head_leaf() const {
  if (nodes.empty()) return -1;
  int idx = root();
  while (nodes[idx].rule != Rule::lex) {
    idx = nodes[idx].head_child == HeadChild::left ? nodes[idx].left : nodes[idx].right;
  }
  return nodes[idx].begin;
}

std::vector<int> Derivation::leaves() const {
  std::vector<int> out(length(), -1);
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    if (nodes[i].rule == Rule::lex) out[nodes[i].begin] = i;
  }
  return out;
}

std::optional<Category> apply_rule(Rule rule, const Category& left, const Category& right) {
  switch (rule) {
    case Rule::fwd_app:
      if (left.kind() == Category::Kind::forward && left.argument() == right) return left.result();
      return std::nullopt;
    case Rule::bwd_app:
      if (right.kind() == Category::Kind::backward && right.argument() == left) return right.result();
      return std::nullopt;
    case Rule::wh_merge: {
      if (!left.is_atom("WH")) return std::nullopt;
      if (right.is_atom("S")) return right;
      if (right.kind() == Category::Kind::backward && right.result().is_atom("S") && right.argument().is_atom("NP")) {
        return right.result();
      }
      return std::nullopt;
    }
    case Rule::rc_merge: {
      if (!left.is_atom("RC_THAT")) return std::nullopt;
      const bool clause = right.is_atom("S_GAP") || right.is_atom("S") ||
                          (right.kind() == Category::Kind::backward && right.result().is_atom("S") &&
                           right.argument().is_atom("NP"));
      if (!clause) return std::nullopt;
      return Category::backward(Category::atom("NP"), Category::atom("NP"));
    }
    case Rule::lex:
      return std::nullopt;
  }
  return std::nullopt;
}

HeadChild head_child_for(Rule rule, const Category& left, const Category& right) {
  switch (rule) {
    case Rule::fwd_app:
    case Rule::wh_merge:
    case Rule::rc_merge:
      return HeadChild::left;
    case Rule::bwd_app:
      return is_np_modifier(right) && left.is_atom("NP") ? HeadChild::left : HeadChild::right;
    case Rule::lex:
      return HeadChild::none;
  }
  return HeadChild::none;
}

ChartSummary chart_summary(std::span<const int> types, const TypeTable& table) {
  ChartSummary s;
  if (types.empty()) return s;
  Chart chart(types, table);
  for (const auto& e : chart.cell(0, chart.size())) {
    s.derivations = sat_add(s.derivations, e.count);
    if (std::find(s.root_categories.begin(), s.root_categories.end(), e.cat.str()) == s.root_categories.end()) {
      s.root_categories.push_back(e.cat.str());
    }
  }
  return s;
}

Derivation cky_parse(std::span<const int> types, const TypeTable& table, std::span<const ContentToken> tokens,
                     const Lexicon& lexicon) {
  if (types.empty()) throw NoParse("empty type sequence");
  Chart chart(types, table);
  const int n = chart.size();
  auto& roots = chart.cell(0, n);
  if (roots.empty()) throw NoParse("no complete derivation over " + std::to_string(n) + " tokens");

  std::uint64_t total = 0;
  for (const auto& e : roots) {
    total = sat_add(total, e.count);
    if (!(e.cat == roots.front().cat)) {
      throw AmbiguousParse("root categories differ: " + roots.front().cat.str() + " vs " + e.cat.str());
    }
  }
  auto make = [&](Chart::Tree tree) {
    Derivation d;
    d.nodes = std::move(tree);
    auto cls = table.class_of(d.root_node().category);
    if (!cls) throw NoParse("root category " + d.root_node().category.str() + " is not a table type");
    d.root_type = *cls;
    return d;
  };
  if (total == 1) return make(std::move(chart.enumerate(0, n, 0).front()));
  if (total > kEnumerationCap) {
    throw AmbiguousParse(std::to_string(total) + " derivations exceed the audit cap");
  }

  std::vector<ContentToken> fallback;
  if (tokens.empty()) {
    fallback = placeholders(n);
    tokens = fallback;
  }
  std::optional<Derivation> first;
  lf::EdgeSet first_edges;
  for (int idx = 0; idx < static_cast<int>(roots.size()); ++idx) {
    for (auto& tree : chart.enumerate(0, n, idx)) {
      Derivation d = make(std::move(tree));
      lf::EdgeSet edges = extract_edges(d, tokens, table, lexicon);
      if (!first) {
        first = std::move(d);
        first_edges = std::move(edges);
      } else if (!(edges == first_edges)) {
        throw AmbiguousParse(std::to_string(total) + " derivations with different edge sets");
      }
    }
  }
  return std::move(*first);
}

}  // namespace ccgnca::ccg

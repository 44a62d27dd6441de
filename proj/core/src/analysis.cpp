// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#include "ccgnca/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "ccgnca/error.hpp"

namespace ccgnca::analysis {

namespace {

using ccg::Derivation;
using ccg::Rule;

std::vector<int> parents_of(const Derivation& d) {
  std::vector<int> parent(d.nodes.size(), -1);
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    if (d.nodes[i].left >= 0) parent[static_cast<std::size_t>(d.nodes[i].left)] = static_cast<int>(i);
    if (d.nodes[i].right >= 0) parent[static_cast<std::size_t>(d.nodes[i].right)] = static_cast<int>(i);
  }
  return parent;
}

/// Content position reached by following head children from `node`.
int head_position(const Derivation& d, int node) {
  while (d.nodes[static_cast<std::size_t>(node)].left >= 0) {
    const auto& n = d.nodes[static_cast<std::size_t>(node)];
    node = n.head_child == ccg::HeadChild::right ? n.right : n.left;
  }
  return d.nodes[static_cast<std::size_t>(node)].begin;
}

bool has_rc_below(const Derivation& d, int node) {
  const auto& n = d.nodes[static_cast<std::size_t>(node)];
  if (n.rule == Rule::rc_merge) return true;
  return n.left >= 0 && (has_rc_below(d, n.left) || has_rc_below(d, n.right));
}

/// True when some ancestor takes the path from `node` as a clausal argument
/// or as part of a relative clause.
bool inside_clause_argument(const Derivation& d, const std::vector<int>& parent, int node) {
  for (int x = node, q = parent[static_cast<std::size_t>(node)]; q >= 0; x = q, q = parent[static_cast<std::size_t>(q)]) {
    const auto& qn = d.nodes[static_cast<std::size_t>(q)];
    if (qn.rule == Rule::rc_merge) return true;
    if (qn.rule == Rule::fwd_app && qn.right == x) {
      const auto& cat = d.nodes[static_cast<std::size_t>(x)].category;
      if (cat.is_atom("S") || (cat.kind() == ccg::Category::Kind::backward && cat.result().is_atom("S")))
        return true;
    }
  }
  return false;
}

struct SubjectModifier {
  int modified_np = -1;  // NP + NP\NP node
  int consumer = -1;     // backward application taking it as subject
  bool relative = false;
  bool ccomp_clause = false;  // the consuming clause is headed by a CCOMP verb
};

/// NP + NP\NP results and how they are consumed.
std::vector<SubjectModifier> modified_subjects(const Derivation& d, const std::vector<int>& parent,
                                               const ccg::TypeTable& table) {
  std::vector<SubjectModifier> out;
  const auto leaves = d.leaves();
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    const auto& n = d.nodes[i];
    if (!n.modified || n.right < 0) continue;
    const int c = parent[i];
    if (c < 0) continue;
    const auto& cn = d.nodes[static_cast<std::size_t>(c)];
    if (cn.rule != Rule::bwd_app || cn.left != static_cast<int>(i)) continue;
    SubjectModifier m;
    m.modified_np = static_cast<int>(i);
    m.consumer = c;
    m.relative = has_rc_below(d, n.right);
    const int verb = head_position(d, cn.right);
    const int type = d.nodes[static_cast<std::size_t>(leaves[static_cast<std::size_t>(verb)])].type_id;
    m.ccomp_clause = type >= 0 && table.at(type).name == "CCOMP";
    out.push_back(m);
  }
  return out;
}

struct Gap {
  GapRole role = GapRole::none;
  int content_index = -1;
};

Gap find_gap(const lf::LogicalForm& lf, const ccg::Trajectory& t) {
  for (const auto& term : lf.terms) {
    if (term.kind != lf::TermKind::role || term.args.size() < 2) continue;
    if (term.args[1].kind != lf::Arg::Kind::wh) continue;
    Gap g;
    if (term.role_name == "agent") g.role = GapRole::agent;
    else if (term.role_name == "theme") g.role = GapRole::theme;
    else if (term.role_name == "recipient") g.role = GapRole::recipient;
    if (term.args[0].kind == lf::Arg::Kind::variable)
      for (std::size_t i = 0; i < t.content_tokens.size(); ++i)
        if (t.content_tokens[i].position == term.args[0].index) g.content_index = static_cast<int>(i);
    return g;
  }
  return {};
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

/// Gap-hosting verb read off gold types alone: the rightmost verbal type
/// after the wh-word, or -1 outside wh-questions.
int wh_gap_verb(const ccg::Trajectory& t, const ccg::TypeTable& table) {
  int wh = -1;
  for (std::size_t i = 0; i < t.initial_types.size(); ++i)
    if (table.at(t.initial_types[i]).name == "WH") wh = static_cast<int>(i);
  if (wh < 0) return -1;
  int verb = -1;
  for (std::size_t i = static_cast<std::size_t>(wh) + 1; i < t.initial_types.size(); ++i)
    if (table.at(t.initial_types[i]).roles.is_verbal()) verb = static_cast<int>(i);
  return verb;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::string_view to_string(GapRole r) {
  switch (r) {
    case GapRole::agent: return "agent";
    case GapRole::theme: return "theme";
    case GapRole::recipient: return "recipient";
    case GapRole::none: return "none";
  }
  return "none";
}

std::string_view to_string(Voice v) {
  switch (v) {
    case Voice::active: return "active";
    case Voice::passive: return "passive";
    case Voice::none: return "none";
  }
  return "none";
}

std::string_view to_string(RcAttachment a) {
  switch (a) {
    case RcAttachment::main_subject: return "main_subject";
    case RcAttachment::embedded: return "embedded";
    case RcAttachment::object_side: return "object_side";
    case RcAttachment::none: return "none";
  }
  return "none";
}

std::string_view to_string(Mechanism m) {
  switch (m) {
    case Mechanism::A_forward_arg_extraction: return "A_forward_arg_extraction";
    case Mechanism::B_subject_side_modifier: return "B_subject_side_modifier";
    case Mechanism::covered: return "covered";
  }
  return "covered";
}

std::string SubPatternLabel::key() const {
  return "gap=" + std::string(to_string(gap_role)) + " voice=" + std::string(to_string(gap_voice)) +
         " rc=" + std::string(to_string(rc_attachment));
}

SubPatternLabel classify_subpattern(const lf::LogicalForm& lf, const ccg::Trajectory& t,
                                    const ccg::TypeTable& table) {
  SubPatternLabel label;
  const Gap gap = find_gap(lf, t);
  label.gap_role = gap.role;
  if (gap.role != GapRole::none) {
    label.gap_voice = Voice::active;
    if (gap.content_index >= 0 &&
        table.at(t.initial_types[static_cast<std::size_t>(gap.content_index)]).name.starts_with("PASS"))
      label.gap_voice = Voice::passive;
  }

  const Derivation& d = t.derivation;
  const auto parent = parents_of(d);
  int rc = -1;
  for (std::size_t i = 0; i < d.nodes.size(); ++i)
    if (d.nodes[i].rule == Rule::rc_merge && (rc < 0 || d.nodes[i].begin < d.nodes[static_cast<std::size_t>(rc)].begin))
      rc = static_cast<int>(i);
  if (rc < 0) return label;
  label.has_rc = true;

  const int np = parent[static_cast<std::size_t>(rc)];  // NP + NP\NP
  const int consumer = np >= 0 ? parent[static_cast<std::size_t>(np)] : -1;
  if (consumer < 0) {
    label.rc_attachment = RcAttachment::object_side;
    return label;
  }
  const auto& c = d.nodes[static_cast<std::size_t>(consumer)];
  if (c.rule == Rule::bwd_app && c.left == np) {
    const auto subjects = modified_subjects(d, parent, table);
    bool ccomp = false;
    for (const auto& s : subjects)
      if (s.modified_np == np) ccomp = s.ccomp_clause;
    // A relative clause on the subject of a CCOMP-headed clause counts as
    // embedded: it sits inside the complement-taking structure.
    label.rc_attachment = ccomp || inside_clause_argument(d, parent, consumer) ? RcAttachment::embedded
                                                                               : RcAttachment::main_subject;
  } else if (c.rule == Rule::fwd_app && c.right == np) {
    label.rc_attachment = RcAttachment::object_side;
  } else {
    label.rc_attachment = RcAttachment::embedded;
  }
  return label;
}

void TrainCoverage::add(const ccg::Trajectory& t, const ccg::TypeTable& table) {
  const auto& ty = t.initial_types;
  for (std::size_t n = 2; n <= 3; ++n)
    for (std::size_t i = 0; i + n <= ty.size(); ++i) ngrams_.insert(std::vector<int>(ty.begin() + i, ty.begin() + i + n));
  for (const auto& node : t.derivation.nodes) {
    if (node.left < 0) continue;
    merges_.emplace(t.derivation.nodes[static_cast<std::size_t>(node.left)].category.str(),
                    t.derivation.nodes[static_cast<std::size_t>(node.right)].category.str(), node.rule);
  }
  for (std::size_t i = 0; i < ty.size(); ++i)
    if (table.at(ty[i]).roles.is_verbal()) verb_types_[lower(t.content_tokens[i].text)].insert(ty[i]);
  ++count_;
}

bool TrainCoverage::has_ngram(const std::vector<int>& gram) const { return ngrams_.contains(gram); }

const std::set<int>* TrainCoverage::verb_types(const std::string& word) const {
  const auto it = verb_types_.find(lower(word));
  return it == verb_types_.end() ? nullptr : &it->second;
}

std::set<Mechanism> classify_mechanism(const ccg::Trajectory& t, const TrainCoverage& coverage,
                                       const ccg::TypeTable& table) {
  std::set<Mechanism> out;
  const int verb = wh_gap_verb(t, table);
  if (verb >= 0) {
    const int type = t.initial_types[static_cast<std::size_t>(verb)];
    const auto* seen = coverage.verb_types(t.content_tokens[static_cast<std::size_t>(verb)].text);
    if (!seen || !seen->contains(type)) out.insert(Mechanism::A_forward_arg_extraction);
  }
  const auto parent = parents_of(t.derivation);
  for (const auto& s : modified_subjects(t.derivation, parent, table))
    if (!(s.relative && s.ccomp_clause)) out.insert(Mechanism::B_subject_side_modifier);
  if (out.empty()) out.insert(Mechanism::covered);
  return out;
}

std::vector<std::vector<int>> ngram_coverage(const TrainCoverage& coverage, std::span<const int> types, int n) {
  if (n != 2 && n != 3) throw Error("ngram_coverage: n must be 2 or 3");
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= types.size(); ++i) {
    std::vector<int> g(types.begin() + static_cast<std::ptrdiff_t>(i), types.begin() + static_cast<std::ptrdiff_t>(i) + n);
    if (!coverage.has_ngram(g) && std::find(out.begin(), out.end(), g) == out.end()) out.push_back(std::move(g));
  }
  return out;
}

std::vector<Merge> novel_merges(const TrainCoverage& coverage, const ccg::Derivation& d) {
  std::vector<Merge> out;
  for (const auto& node : d.nodes) {
    if (node.left < 0) continue;
    Merge m{d.nodes[static_cast<std::size_t>(node.left)].category.str(),
            d.nodes[static_cast<std::size_t>(node.right)].category.str(), node.rule};
    if (!coverage.has_merge(m) && std::find(out.begin(), out.end(), m) == out.end()) out.push_back(std::move(m));
  }
  return out;
}

Decomposition decompose_category(const std::string& category, const std::vector<eval::EvalRecord>& records,
                                 const std::vector<std::string>& keys, eval::Metric metric) {
  if (keys.size() != records.size()) throw Error("decompose_category: one key per record required");
  std::map<std::string, DecompositionRow> rows;
  auto ok = [&](const eval::EvalRecord& r) {
    switch (metric) {
      case eval::Metric::type: return r.type_match;
      case eval::Metric::edge: return r.edge_match;
      case eval::Metric::initial: return r.initial_match;
      case eval::Metric::final: return r.final_match;
    }
    return false;
  };
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& row = rows[keys[i]];
    row.key = keys[i];
    ++row.count;
    row.correct += ok(records[i]);
  }
  Decomposition d;
  d.category = category;
  d.all_pass.key = "subtotal_100";
  d.all_fail.key = "subtotal_0";
  d.mixed.key = "subtotal_mixed";
  d.total.key = "total";
  auto finish = [](DecompositionRow& r) {
    r.accuracy = r.count ? 100.0 * static_cast<double>(r.correct) / static_cast<double>(r.count) : 0.0;
  };
  for (auto& [key, row] : rows) {
    finish(row);
    DecompositionRow& bucket = row.correct == row.count ? d.all_pass : row.correct == 0 ? d.all_fail : d.mixed;
    bucket.count += row.count;
    bucket.correct += row.correct;
    d.total.count += row.count;
    d.total.correct += row.correct;
    d.rows.push_back(row);
  }
  for (auto* r : {&d.all_pass, &d.all_fail, &d.mixed, &d.total}) finish(*r);
  return d;
}

std::string render_text(const Decomposition& d) {
  std::string out = d.category + "\n";
  auto line = [&](const DecompositionRow& r) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "  %-44s %6zu %6.1f%%\n", r.key.c_str(), r.count, r.accuracy);
    out += buf;
  };
  for (const auto& r : d.rows) line(r);
  for (const auto* r : {&d.all_pass, &d.all_fail, &d.mixed, &d.total}) line(*r);
  return out;
}

std::string render_json(const Decomposition& d) {
  auto row = [](const DecompositionRow& r) {
    nlohmann::ordered_json j;
    j["key"] = r.key;
    j["count"] = r.count;
    j["correct"] = r.correct;
    j["accuracy"] = nlohmann::ordered_json::parse(fixed(r.accuracy));
    return j;
  };
  nlohmann::ordered_json j;
  j["category"] = d.category;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : d.rows) rows.push_back(row(r));
  j["rows"] = rows;
  j["subtotal_100"] = row(d.all_pass);
  j["subtotal_0"] = row(d.all_fail);
  j["subtotal_mixed"] = row(d.mixed);
  j["total"] = row(d.total);
  return j.dump(2) + "\n";
}

}  // namespace ccgnca::analysis

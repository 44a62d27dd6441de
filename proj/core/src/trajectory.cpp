// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#include "ccgnca/trajectory.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "ccgnca/error.hpp"

namespace ccgnca::ccg {

namespace {

bool is_nmod(const std::string& role) { return role.rfind("nmod.", 0) == 0; }

/// Positional view of a gold LF.
struct LfView {
  std::vector<std::string> lower;
  std::set<int> entities;
  std::set<int> events;
  std::map<int, std::vector<std::pair<std::string, int>>> roles;  // event -> (role, dependent)
  std::map<int, std::pair<int, std::string>> nmod_of;             // dependent -> (head, prep)
  std::set<int> xcomp_deps;
  std::set<std::string> lambda_roles;

  LfView(const lf::LogicalForm& lf, std::span<const std::string> tokens) {
    for (const auto& t : tokens) lower.push_back(lf::to_lower(t));
    for (const auto& term : lf.terms) {
      if (term.kind != lf::TermKind::role) {
        if (auto p = lf::resolve_arg(term.args[0], tokens)) entities.insert(*p);
        continue;
      }
      const auto head = lf::resolve_arg(term.args[0], tokens);
      const auto dep = lf::resolve_arg(term.args[1], tokens, nullptr, head);
      if (!head) {
        lambda_roles.insert(term.role_name);
        continue;
      }
      if (is_nmod(term.role_name)) {
        entities.insert(*head);
        if (dep) {
          entities.insert(*dep);
          nmod_of[*dep] = {*head, term.role_name.substr(5)};
        }
        continue;
      }
      events.insert(*head);
      if (!dep) continue;
      roles[*head].push_back({term.role_name, *dep});
      if (term.role_name == "xcomp") {
        xcomp_deps.insert(*dep);
      } else if (term.role_name != "ccomp") {
        entities.insert(*dep);
      }
    }
    for (int e : events) entities.erase(e);
  }

  int size() const { return static_cast<int>(lower.size()); }
};

class Typer {
 public:
  Typer(const LfView& v, const TypeTable& table, const Lexicon& lex) : v_(v), table_(table), lex_(lex) {}

  int type_token(int pos, const std::string& text) const {
    const std::string& w = v_.lower[pos];
    if (lf::is_wh_word(w)) return id(pos, "WH");
    if (w == "that") return id(pos, "RC_THAT");
    if (v_.events.contains(pos)) return verb(pos);
    if (v_.entities.contains(pos)) return id(pos, "NP");
    if (w == lex_.infinitive_marker && pos + 1 < v_.size() && v_.xcomp_deps.contains(pos + 1)) {
      return id(pos, "TO_INF");
    }
    if (modifier_preposition(pos)) return id(pos, "PREP");
    if (!lex_.preposition_role(w).empty()) return id(pos, stranded(pos) ? "PP" : "P_ARG");
    throw DerivationGap(pos, "'" + text + "' has no role in the logical form");
  }

 private:
  int id(int pos, std::string_view name) const {
    if (auto i = table_.find(name)) return *i;
    throw DerivationGap(pos, "type table lacks " + std::string(name));
  }

  /// First entity right of `pos` (articles skipped) is an nmod dependent
  /// introduced by this preposition.
  bool modifier_preposition(int pos) const {
    int j = pos + 1;
    while (j < v_.size() && lex_.is_article(v_.lower[j])) ++j;
    if (j >= v_.size()) return false;
    auto it = v_.nmod_of.find(j);
    return it != v_.nmod_of.end() && it->second.second == v_.lower[pos] && it->second.first < pos;
  }

  bool stranded(int pos) const {
    const int j = pos + 1;
    if (j >= v_.size()) return true;
    return !v_.entities.contains(j) && !lex_.is_article(v_.lower[j]) && !lf::is_wh_word(v_.lower[j]);
  }

  bool passive(int verb) const {
    for (int j = verb - 1; j >= 0; --j) {
      if (v_.lower[j] == lex_.passive_auxiliary) return true;
      if (v_.events.contains(j) || v_.lower[j] == "that") return false;
    }
    return false;
  }

  enum class Real { np, pp, s, vp, gap };

  /// How an argument of `verb` is realized in the sentence, with the
  /// position that orders forward arguments.
  std::pair<Real, int> realize(int verb, const std::string& role, int dep, std::set<int>& used_preps) const {
    if (role == "ccomp") return {Real::s, dep};
    if (role == "xcomp") return {Real::vp, dep};
    if (dep > verb) {
      int j = dep - 1;
      while (j > verb && lex_.is_article(v_.lower[j])) --j;
      if (j > verb && lex_.preposition_role(v_.lower[j]) == role) return {Real::pp, j};
      return {Real::np, dep};
    }
    for (int p = verb + 1; p < v_.size(); ++p) {
      if (used_preps.contains(p)) continue;
      if (lex_.preposition_role(v_.lower[p]) == role && stranded(p)) {
        used_preps.insert(p);
        return {Real::pp, p};
      }
    }
    return {Real::gap, dep};
  }

  int verb(int pos) const {
    const auto it = v_.roles.find(pos);
    static const std::vector<std::pair<std::string, int>> kNone;
    const auto& args = it == v_.roles.end() ? kNone : it->second;
    auto dep_of = [&](std::string_view role) -> int {
      for (const auto& [r, d] : args) {
        if (r == role) return d;
      }
      return -1;
    };

    const bool pass = passive(pos);
    std::string subject;
    if (pass) {
      int best = -1;
      for (const auto& [r, d] : args) {
        if ((r == "theme" || r == "recipient") && d < pos && d > best) {
          best = d;
          subject = r;
        }
      }
      if (subject.empty()) subject = "theme";
    } else {
      subject = dep_of("agent") >= 0 ? "agent" : "theme";
    }

    std::vector<std::pair<int, Real>> forward;
    std::vector<std::pair<std::string, int>> gaps;
    std::set<int> used_preps;
    bool subject_seen = false;
    for (const auto& [r, d] : args) {
      if (r == subject && !subject_seen) {
        subject_seen = true;
        continue;
      }
      const auto [kind, at] = realize(pos, r, d, used_preps);
      if (kind == Real::gap) {
        gaps.push_back({r, d});
      } else {
        forward.push_back({at, kind});
      }
    }
    std::sort(forward.begin(), forward.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::string key;
    for (const auto& f : forward) {
      switch (f.second) {
        case Real::np:
          key += "N";
          break;
        case Real::pp:
          key += "P";
          break;
        case Real::s:
          key += "S";
          break;
        case Real::vp:
          key += "V";
          break;
        case Real::gap:
          break;
      }
    }

    const char* name = nullptr;
    if (pass) {
      if (key.empty()) name = "PASS";
      else if (key == "P") name = "PASS_PP";
      else if (key == "PP") name = "PASS_PP2";
      else if (key == "N") name = "PASS_DO";
      else if (key == "NP") name = "PASS_DO_BY";
    } else if (subject == "theme") {
      if (key.empty()) name = "UNACC";
    } else if (key.empty()) {
      const bool rc_gap = gaps.size() == 1 && gaps[0].first == "theme" && !lf::is_wh_word(v_.lower[gaps[0].second]);
      name = rc_gap ? "TV_GAP" : "IV";
    } else if (key == "N") {
      name = "TV";
    } else if (key == "NN") {
      name = "DTV";
    } else if (key == "NP") {
      name = "DTV_TO";
    } else if (key == "P") {
      name = "TV_PP";
    } else if (key == "S") {
      name = "CCOMP";
    } else if (key == "V") {
      name = "XCOMP";
    }
    if (!name) {
      throw DerivationGap(pos, std::string(pass ? "passive" : "active") + " verb frame '" + key + "' subject " +
                                   subject);
    }
    return id(pos, name);
  }

  const LfView& v_;
  const TypeTable& table_;
  const Lexicon& lex_;
};

int primitive_type(const LfView& v, const TypeTable& table) {
  const auto& r = v.lambda_roles;
  std::string_view name = "NP";
  if (!r.empty()) {
    if (r.contains("ccomp")) name = "CCOMP";
    else if (r.contains("xcomp")) name = "XCOMP";
    else if (r.contains("recipient")) name = "DTV";
    else if (r.contains("agent") && r.contains("theme")) name = "TV";
    else if (r.contains("agent")) name = "IV";
    else name = "UNACC";
  }
  if (auto id = table.find(name)) return *id;
  throw DerivationGap(0, "type table lacks " + std::string(name));
}

}  // namespace

StripResult strip_function_words(std::span<const std::string> tokens, const Lexicon& lexicon) {
  StripResult out;
  for (int i = 0; i < static_cast<int>(tokens.size()); ++i) {
    const std::string w = lf::to_lower(tokens[i]);
    if (lexicon.is_function_word(w)) continue;
    if (w == "that" && lexicon.strip_complementizer_that && !(i >= 2 && lexicon.is_article(lf::to_lower(tokens[i - 2])))) {
      continue;
    }
    out.content.push_back({tokens[i], i});
    out.alignment.push_back(i);
  }
  return out;
}

std::vector<int> derive_types(const lf::LogicalForm& lf, std::span<const std::string> tokens,
                              std::span<const ContentToken> content, const TypeTable& table, const Lexicon& lexicon) {
  const LfView view(lf, tokens);
  std::vector<int> out;
  out.reserve(content.size());
  if (!lf.lambda_vars.empty() || (content.size() == 1 && view.events.empty())) {
    if (content.size() != 1) throw DerivationGap(0, "lambda form over several content tokens");
    out.push_back(primitive_type(view, table));
    return out;
  }
  const Typer typer(view, table, lexicon);
  for (const auto& tok : content) out.push_back(typer.type_token(tok.position, tok.text));
  return out;
}

std::vector<int> final_types(const Derivation& d, const TypeTable& table) {
  std::vector<int> out(d.length(), table.empty_id());
  if (!out.empty()) out[d.head_leaf()] = d.root_type;
  return out;
}

Trajectory build_trajectory(const lf::LogicalForm& lf, std::span<const std::string> tokens, const TypeTable& table,
                            const Lexicon& lexicon) {
  Trajectory t;
  t.content_tokens = strip_function_words(tokens, lexicon).content;
  if (t.content_tokens.empty()) throw NoParse("no content tokens");
  t.initial_types = derive_types(lf, tokens, t.content_tokens, table, lexicon);
  t.derivation = cky_parse(t.initial_types, table, t.content_tokens, lexicon);
  t.final_types = final_types(t.derivation, table);
  return t;
}

}  // namespace ccgnca::ccg

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
//
// Edge extraction walks the derivation bottom-up. Each constituent carries
// its semantic head plus whatever is still unresolved: subject slots waiting
// for a backward argument, the forward role queue, explicit gap slots, and
// reduced-type verbs that may host an implicit gap.
#include <algorithm>
#include <deque>

#include "ccgnca/derivation.hpp"
#include "ccgnca/error.hpp"

namespace ccgnca::ccg {

namespace {

enum class Kind { nominal, verbal, transparent, prep_arg, pp, prep_mod, modifier, wh, rc, other };

struct Slot {
  int head;
  std::string role;
};

/// A verb whose lexical type may have lost a forward argument.
struct Candidate {
  int verb;
  std::string role;
  bool dative = false;  // object slot is theme-or-recipient ambiguous
  int object_edge = -1;
};

struct Sem {
  Kind kind = Kind::other;
  int head = -1;
  std::string text;
  std::deque<std::string> queue;
  std::vector<Slot> subjects;
  std::vector<Slot> gaps;
  std::vector<Candidate> candidates;
  std::string pp_role;
  int pp_object = -1;
  bool stranded = false;
  std::vector<std::pair<std::string, int>> mods;
  std::vector<Slot> rc_slots;
};

bool is_atom_pair(const Category& c, Category::Kind k, std::string_view res, std::string_view arg) {
  return c.kind() == k && c.result().is_atom(res) && c.argument().is_atom(arg);
}

bool is_vp(const Category& c) { return is_atom_pair(c, Category::Kind::backward, "S", "NP"); }

class Extractor {
 public:
  Extractor(const Derivation& d, std::span<const ContentToken> tokens, const TypeTable& table, const Lexicon& lex)
      : d_(d), tokens_(tokens), table_(table), lex_(lex) {}

  lf::EdgeSet run() {
    std::vector<Sem> sems(d_.nodes.size());
    for (std::size_t i = 0; i < d_.nodes.size(); ++i) {
      const DerivNode& n = d_.nodes[i];
      if (n.rule == Rule::lex) {
        sems[i] = leaf(n);
        continue;
      }
      const Sem& l = sems[n.left];
      const Sem& r = sems[n.right];
      switch (n.rule) {
        case Rule::fwd_app:
          sems[i] = forward(l, r, d_.nodes[n.left].category.argument());
          break;
        case Rule::bwd_app:
          sems[i] = backward(l, r);
          break;
        case Rule::wh_merge:
          sems[i] = wh_merge(l, r);
          break;
        case Rule::rc_merge:
          sems[i] = rc_merge(l, r);
          break;
        case Rule::lex:
          break;
      }
    }
    lf::EdgeSet out;
    out.edges = edges_;
    int len = 0;
    for (const auto& t : tokens_) len = std::max(len, t.position + 1);
    out.token_lemmas.assign(len, "");
    out.definite.assign(len, false);
    for (const auto& t : tokens_) out.token_lemmas[t.position] = t.text;
    out.canonicalize();
    return out;
  }

 private:
  Sem leaf(const DerivNode& n) {
    if (n.begin >= static_cast<int>(tokens_.size())) throw Error("derivation longer than token list");
    const ContentToken& tok = tokens_[n.begin];
    const CCGType& type = table_.at(n.type_id);
    const Category& c = type.category;
    Sem s;
    s.head = tok.position;
    s.text = lf::to_lower(tok.text);
    if (type.roles.transparent) {
      s.kind = Kind::transparent;
    } else if (type.roles.is_verbal()) {
      s.kind = Kind::verbal;
      s.queue.assign(type.roles.forward.begin(), type.roles.forward.end());
      if (!type.roles.subject.empty()) s.subjects.push_back({s.head, type.roles.subject});
      if (!type.roles.gap.empty()) s.gaps.push_back({s.head, type.roles.gap});
      const auto& fwd = type.roles.forward;
      if (type.roles.subject == "agent" && type.roles.gap.empty()) {
        if (fwd.empty() || (fwd.size() == 1 && fwd[0] == "pp")) {
          s.candidates.push_back({s.head, "theme"});
        } else if (fwd.size() == 1 && fwd[0] == "theme") {
          s.candidates.push_back({s.head, "recipient", true});
        }
      }
    } else if (c.is_atom("NP")) {
      s.kind = Kind::nominal;
    } else if (c.is_atom("WH")) {
      s.kind = Kind::wh;
    } else if (c.is_atom("RC_THAT")) {
      s.kind = Kind::rc;
    } else if (c.is_atom("PP")) {
      s.kind = Kind::pp;
      s.stranded = true;
      s.pp_role = prep_role(s.text);
    } else if (is_atom_pair(c, Category::Kind::forward, "PP", "NP")) {
      s.kind = Kind::prep_arg;
      s.pp_role = prep_role(s.text);
    } else if (c.kind() == Category::Kind::forward && is_atom_pair(c.result(), Category::Kind::backward, "NP", "NP")) {
      s.kind = Kind::prep_mod;
    } else if (is_atom_pair(c, Category::Kind::backward, "NP", "NP")) {
      s.kind = Kind::modifier;
    }
    return s;
  }

  std::string prep_role(const std::string& lower) const {
    std::string r = lex_.preposition_role(lower);
    return r.empty() ? "pp" : r;
  }

  int add_edge(int head, const std::string& role, int dep) {
    edges_.push_back({head, role, dep});
    return static_cast<int>(edges_.size()) - 1;
  }

  Sem forward(const Sem& f, const Sem& a, const Category& arg) {
    switch (f.kind) {
      case Kind::transparent:
        return a;
      case Kind::prep_arg: {
        Sem s;
        s.kind = Kind::pp;
        s.head = f.head;
        s.text = f.text;
        s.pp_role = f.pp_role;
        s.pp_object = a.head;
        return s;
      }
      case Kind::prep_mod: {
        Sem s;
        s.kind = Kind::modifier;
        s.head = f.head;
        s.mods.push_back({"nmod." + f.text, a.head});
        return s;
      }
      case Kind::verbal:
        break;
      default:
        return f;
    }
    if (f.queue.empty()) {
      throw RoleExhausted("verb at token " + std::to_string(f.head) + " has no forward role left");
    }
    Sem s = f;
    const std::string role = s.queue.front();
    s.queue.pop_front();
    if (arg.is_atom("NP")) {
      const int idx = add_edge(f.head, role, a.head);
      for (auto& c : s.candidates) {
        if (c.verb == f.head && c.dative && c.object_edge < 0) c.object_edge = idx;
      }
    } else if (arg.is_atom("PP")) {
      const std::string r = a.pp_role.empty() || a.pp_role == "pp" ? role : a.pp_role;
      if (a.stranded) {
        s.gaps.push_back({f.head, r});
      } else if (a.pp_object >= 0) {
        add_edge(f.head, r, a.pp_object);
      }
    } else {
      add_edge(f.head, role, a.head);
      if (is_vp(arg)) s.subjects.insert(s.subjects.end(), a.subjects.begin(), a.subjects.end());
      s.gaps.insert(s.gaps.end(), a.gaps.begin(), a.gaps.end());
      s.candidates.insert(s.candidates.end(), a.candidates.begin(), a.candidates.end());
    }
    return s;
  }

  Sem backward(const Sem& a, const Sem& f) {
    if (f.kind == Kind::modifier) {
      Sem s = a;
      for (const auto& [rel, dep] : f.mods) add_edge(a.head, rel, dep);
      for (const auto& slot : f.rc_slots) add_edge(slot.head, slot.role, a.head);
      return s;
    }
    Sem s = f;
    if (f.kind == Kind::verbal) {
      for (const auto& slot : f.subjects) add_edge(slot.head, slot.role, a.head);
      s.subjects.clear();
    }
    return s;
  }

  /// Rightmost reduced-type verb on the clausal spine.
  std::optional<Candidate> pick(const std::vector<Candidate>& cs) const {
    std::optional<Candidate> best;
    for (const auto& c : cs) {
      if (!best || c.verb > best->verb) best = c;
    }
    return best;
  }

  Sem wh_merge(const Sem& w, const Sem& x) {
    Sem s = x;
    s.kind = Kind::verbal;
    if (!x.subjects.empty()) {
      for (const auto& slot : x.subjects) add_edge(slot.head, slot.role, w.head);
    } else if (!x.gaps.empty()) {
      for (const auto& slot : x.gaps) add_edge(slot.head, slot.role, w.head);
    } else if (auto c = pick(x.candidates)) {
      std::string role = c->role;
      // Role disambiguation: "what" asks for the thing given, so the
      // surviving object was the recipient.
      if (c->dative && c->object_edge >= 0 && w.text == "what") {
        role = "theme";
        edges_[c->object_edge].role = "recipient";
      }
      add_edge(c->verb, role, w.head);
    }
    s.subjects.clear();
    s.gaps.clear();
    s.candidates.clear();
    return s;
  }

  Sem rc_merge(const Sem& r, const Sem& x) {
    Sem s;
    s.kind = Kind::modifier;
    s.head = r.head;
    if (!x.subjects.empty()) {
      s.rc_slots = x.subjects;
    } else if (!x.gaps.empty()) {
      s.rc_slots = x.gaps;
    } else if (auto c = pick(x.candidates)) {
      s.rc_slots.push_back({c->verb, c->role});
    }
    return s;
  }

  const Derivation& d_;
  std::span<const ContentToken> tokens_;
  const TypeTable& table_;
  const Lexicon& lex_;
  std::vector<lf::Edge> edges_;
};

}  // namespace

lf::EdgeSet extract_edges(const Derivation& derivation, std::span<const ContentToken> tokens, const TypeTable& table,
                          const Lexicon& lexicon) {
  if (derivation.nodes.empty()) return {};
  return Extractor(derivation, tokens, table, lexicon).run();
}

}  // namespace ccgnca::ccg

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#include "ccgnca/lf.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "ccgnca/error.hpp"

namespace ccgnca::lf {

namespace {

bool is_single_char_token(char c) {
  return c == '(' || c == ')' || c == ',' || c == '.' || c == ';' || c == '*';
}

std::vector<std::string> lex(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (is_single_char_token(c)) {
      out.emplace_back(1, c);
      ++i;
    } else {
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
             !is_single_char_token(text[j])) {
        ++j;
      }
      out.emplace_back(text.substr(i, j - i));
      i = j;
    }
  }
  return out;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

class Parser {
 public:
  explicit Parser(std::vector<std::string> toks) : toks_(std::move(toks)) {}

  LogicalForm parse() {
    if (toks_.empty()) throw SyntaxError(0, "empty logical form");
    LogicalForm lf;

    // Bare proper-name primitive, e.g. "Emma".
    if (toks_.size() == 1 && !is_single_char_token(toks_[0][0]) && toks_[0] != "?") {
      lf.terms.push_back({toks_[0], TermKind::unary_noun, {}, {Arg::constant(toks_[0])}});
      return lf;
    }

    while (peek() == "*") {
      next();
      Term t = parse_term(lf);
      if (t.kind != TermKind::unary_noun || t.args[0].kind != Arg::Kind::variable) {
        throw SyntaxError(pos_, "definite marker must precede a unary noun term");
      }
      lf.definite_markers.insert(t.args[0].index);
      lf.terms.push_back(std::move(t));
      expect(";");
    }
    while (peek() == "LAMBDA") {
      next();
      const std::string var = next();
      if (var.empty() || is_single_char_token(var[0])) throw SyntaxError(pos_, "bad lambda variable");
      lf.lambda_vars.push_back(var);
      expect(".");
    }
    lf.terms.push_back(parse_term(lf));
    while (!at_end()) {
      if (peek() == "AND") {
        next();
        lf.terms.push_back(parse_term(lf));
      } else {
        throw SyntaxError(pos_, "expected AND, got '" + peek() + "'");
      }
    }

    // Unary predicates over event variables are event predicates.
    std::set<int> event_vars;
    for (const auto& t : lf.terms) {
      if (t.kind == TermKind::role && t.args[0].kind == Arg::Kind::variable &&
          t.role_name.rfind("nmod.", 0) != 0) {
        event_vars.insert(t.args[0].index);
      }
    }
    for (auto& t : lf.terms) {
      if (t.kind == TermKind::unary_noun && t.args[0].kind == Arg::Kind::variable &&
          event_vars.contains(t.args[0].index)) {
        t.kind = TermKind::event_predicate;
      }
    }
    return lf;
  }

 private:
  Term parse_term(LogicalForm& lf) {
    const std::size_t start = pos_;
    std::string pred = next();
    if (pred.empty() || is_single_char_token(pred[0]) || pred == "AND" || pred == "LAMBDA") {
      throw SyntaxError(start, "expected predicate, got '" + pred + "'");
    }
    std::string role;
    if (peek() == ".") {
      next();
      role = next();
      if (role.empty() || is_single_char_token(role[0])) throw SyntaxError(pos_, "expected role name");
      if (role == "nmod") {
        expect(".");
        const std::string prep = next();
        if (prep.empty() || is_single_char_token(prep[0])) throw SyntaxError(pos_, "expected preposition");
        role += "." + prep;
      }
      if (!is_known_role(role)) throw UnknownRole(role);
    }
    expect("(");
    std::vector<Arg> args;
    args.push_back(parse_arg(lf));
    while (peek() == ",") {
      next();
      args.push_back(parse_arg(lf));
    }
    expect(")");

    Term t;
    t.predicate = std::move(pred);
    t.args = std::move(args);
    if (role.empty()) {
      if (t.args.size() != 1) throw SyntaxError(start, "unary term needs exactly one argument");
      t.kind = TermKind::unary_noun;
    } else {
      if (t.args.size() != 2) throw SyntaxError(start, "role term needs exactly two arguments");
      t.kind = TermKind::role;
      t.role_name = std::move(role);
    }
    return t;
  }

  Arg parse_arg(LogicalForm& lf) {
    const std::size_t start = pos_;
    const std::string tok = next();
    if (tok.empty() || is_single_char_token(tok[0])) throw SyntaxError(start, "expected argument");
    if (tok == "x" && peek() == "_") {
      next();
      const std::string num = next();
      if (!all_digits(num)) throw SyntaxError(pos_, "bad variable subscript");
      return add_var(lf, std::atoi(num.c_str()));
    }
    if (tok.size() > 2 && tok[0] == 'x' && tok[1] == '_' && all_digits(std::string_view(tok).substr(2))) {
      return add_var(lf, std::atoi(tok.c_str() + 2));
    }
    if (tok == "?") return Arg::wh();
    if (std::find(lf.lambda_vars.begin(), lf.lambda_vars.end(), tok) != lf.lambda_vars.end()) {
      return Arg::lambda(tok);
    }
    return Arg::constant(tok);
  }

  static Arg add_var(LogicalForm& lf, int i) {
    lf.variables.insert(i);
    return Arg::variable(i);
  }

  const std::string& peek() const {
    static const std::string kEnd;
    return pos_ < toks_.size() ? toks_[pos_] : kEnd;
  }
  std::string next() {
    if (pos_ >= toks_.size()) throw SyntaxError(pos_, "unexpected end of input");
    return toks_[pos_++];
  }
  void expect(std::string_view s) {
    if (peek() != s) throw SyntaxError(pos_, "expected '" + std::string(s) + "'");
    ++pos_;
  }
  bool at_end() const { return pos_ >= toks_.size(); }

  std::vector<std::string> toks_;
  std::size_t pos_ = 0;
};

std::string render_arg(const Arg& a) {
  switch (a.kind) {
    case Arg::Kind::variable:
      return "x _ " + std::to_string(a.index);
    case Arg::Kind::wh:
      return "?";
    default:
      return a.name;
  }
}

std::string render_term(const Term& t) {
  std::string out = t.predicate;
  if (!t.role_name.empty()) {
    // "nmod.beside" -> "nmod . beside"
    std::string spaced;
    for (std::size_t i = 0; i < t.role_name.size(); ++i) {
      if (t.role_name[i] == '.') {
        spaced += " . ";
      } else {
        spaced += t.role_name[i];
      }
    }
    out += " . " + spaced;
  }
  out += " ( ";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += " , ";
    out += render_arg(t.args[i]);
  }
  out += " )";
  return out;
}

}  // namespace

LogicalForm parse_lf(std::string_view text) { return Parser(lex(text)).parse(); }

std::string render(const LogicalForm& lf) {
  if (lf.terms.size() == 1 && lf.terms[0].kind == TermKind::unary_noun &&
      lf.terms[0].args[0].kind == Arg::Kind::constant && lf.terms[0].args[0].name == lf.terms[0].predicate) {
    return lf.terms[0].predicate;
  }
  std::string out;
  std::vector<const Term*> body;
  for (const auto& t : lf.terms) {
    if (t.kind == TermKind::unary_noun && t.args[0].kind == Arg::Kind::variable &&
        lf.definite_markers.contains(t.args[0].index)) {
      out += "* " + render_term(t) + " ; ";
    } else {
      body.push_back(&t);
    }
  }
  for (const auto& v : lf.lambda_vars) out += "LAMBDA " + v + " . ";
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) out += " AND ";
    out += render_term(*body[i]);
  }
  return out;
}

bool is_known_role(std::string_view role) {
  if (role == "agent" || role == "theme" || role == "recipient" || role == "ccomp" || role == "xcomp") {
    return true;
  }
  return role.size() > 5 && role.substr(0, 5) == "nmod.";
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_wh_word(std::string_view token) {
  const std::string t = to_lower(token);
  return t == "who" || t == "what" || t == "whom";
}

std::vector<std::string> split_tokens(std::string_view sentence) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && std::isspace(static_cast<unsigned char>(sentence[i]))) ++i;
    std::size_t j = i;
    while (j < sentence.size() && !std::isspace(static_cast<unsigned char>(sentence[j]))) ++j;
    if (j > i) out.emplace_back(sentence.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<int> resolve_arg(const Arg& arg, std::span<const std::string> tokens,
                               const VariableAlignment* alignment, std::optional<int> head) {
  const int n = static_cast<int>(tokens.size());
  switch (arg.kind) {
    case Arg::Kind::lambda:
      return std::nullopt;
    case Arg::Kind::variable: {
      int pos = arg.index;
      if (alignment) {
        auto it = alignment->find(arg.index);
        if (it == alignment->end()) {
          throw AlignmentError("variable x_" + std::to_string(arg.index) + " missing from alignment");
        }
        pos = it->second;
      }
      if (pos < 0 || pos >= n) {
        throw AlignmentError("variable x_" + std::to_string(arg.index) + " exceeds sentence length " +
                             std::to_string(n));
      }
      return pos;
    }
    case Arg::Kind::wh: {
      for (int i = 0; i < n; ++i) {
        if (is_wh_word(tokens[i])) return i;
      }
      throw AlignmentError("wh placeholder without a wh-word in the sentence");
    }
    case Arg::Kind::constant: {
      std::vector<int> hits;
      for (int i = 0; i < n; ++i) {
        if (tokens[i] == arg.name) hits.push_back(i);
      }
      if (hits.empty()) throw AlignmentError("constant '" + arg.name + "' not found in sentence");
      if (hits.size() == 1 || !head) return hits.front();
      // Repeated name: the occurrence nearest to the head token.
      return *std::min_element(hits.begin(), hits.end(), [&](int a, int b) {
        return std::abs(a - *head) < std::abs(b - *head);
      });
    }
  }
  return std::nullopt;
}

void EdgeSet::canonicalize() {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

EdgeSet lf_to_edges(const LogicalForm& lf, std::span<const std::string> tokens,
                    const VariableAlignment* alignment) {
  EdgeSet out;
  out.token_lemmas.reserve(tokens.size());
  for (const auto& t : tokens) out.token_lemmas.push_back(to_lower(t));
  out.definite.assign(tokens.size(), false);

  for (const auto& t : lf.terms) {
    if (t.kind == TermKind::role) {
      const auto head = resolve_arg(t.args[0], tokens, alignment);
      const auto dep = resolve_arg(t.args[1], tokens, alignment, head);
      if (head) {
        out.token_lemmas[*head] = t.role_name.rfind("nmod.", 0) == 0 ? out.token_lemmas[*head] : t.predicate;
      }
      if (head && dep) out.edges.push_back({*head, t.role_name, *dep});
    } else {
      const auto pos = resolve_arg(t.args[0], tokens, alignment);
      if (!pos) continue;
      if (t.args[0].kind == Arg::Kind::variable) out.token_lemmas[*pos] = t.predicate;
      if (t.args[0].kind == Arg::Kind::variable && lf.definite_markers.contains(t.args[0].index)) {
        out.definite[*pos] = true;
      }
    }
  }
  out.canonicalize();
  return out;
}

bool normalize_for_reformatted_match(const EdgeSet& a, const EdgeSet& b) {
  EdgeSet ca = a;
  EdgeSet cb = b;
  ca.canonicalize();
  cb.canonicalize();
  return ca.edges == cb.edges;
}

}  // namespace ccgnca::lf

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#include "ccgnca/ccg_types.hpp"

#include <fstream>
#include <sstream>

#include "ccgnca/error.hpp"

namespace ccgnca::ccg {

struct Category::Node {
  Kind kind;
  std::string atom;
  Category result_cat{nullptr};
  Category argument_cat{nullptr};
  std::string text;
};

namespace {

std::string wrap(const Category& c) { return c.is_atom() ? c.str() : "(" + c.str() + ")"; }

class CategoryParser {
 public:
  explicit CategoryParser(std::string_view s) : s_(s) {}

  Category parse() {
    Category c = parse_expr();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return c;
  }

 private:
  Category parse_expr() {
    Category left = parse_primary();
    for (;;) {
      skip_ws();
      if (pos_ < s_.size() && (s_[pos_] == '/' || s_[pos_] == '\\')) {
        const char slash = s_[pos_++];
        Category right = parse_primary();
        left = slash == '/' ? Category::forward(left, right) : Category::backward(left, right);
      } else {
        return left;
      }
    }
  }

  Category parse_primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (s_[pos_] == '(') {
      ++pos_;
      Category c = parse_expr();
      skip_ws();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return c;
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != '/' && s_[pos_] != '\\' && s_[pos_] != '(' && s_[pos_] != ')' &&
           s_[pos_] != ' ' && s_[pos_] != '\t') {
      ++pos_;
    }
    if (pos_ == start) fail("expected atom");
    return Category::atom(std::string(s_.substr(start, pos_ - start)));
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error("bad category '" + std::string(s_) + "': " + what);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t p = s.find(sep, start);
    out.emplace_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n')) --e;
  return std::string(s.substr(b, e - b));
}

constexpr std::string_view kDefaultTable =
    "# id\tname\tstructure\troles\n"
    "0\tNP\tNP\t-\n"
    "1\tS\tS\t-\n"
    "2\tIV\tS\\NP\tsubj=agent\n"
    "3\tUNACC\tS\\NP\tsubj=theme\n"
    "4\tTV\t(S\\NP)/NP\tsubj=agent;fwd=theme\n"
    "5\tDTV\t((S\\NP)/NP)/NP\tsubj=agent;fwd=recipient,theme\n"
    "6\tDTV_TO\t((S\\NP)/PP)/NP\tsubj=agent;fwd=theme,pp\n"
    "7\tTV_PP\t(S\\NP)/PP\tsubj=agent;fwd=pp\n"
    "8\tPASS\tS\\NP\tsubj=theme\n"
    "9\tPASS_PP\t(S\\NP)/PP\tsubj=theme;fwd=pp\n"
    "10\tPASS_PP2\t((S\\NP)/PP)/PP\tsubj=theme;fwd=pp,pp\n"
    "11\tPASS_DO\t(S\\NP)/NP\tsubj=recipient;fwd=theme\n"
    "12\tPASS_DO_BY\t((S\\NP)/PP)/NP\tsubj=recipient;fwd=theme,pp\n"
    "13\tCCOMP\t(S\\NP)/S\tsubj=agent;fwd=ccomp\n"
    "14\tXCOMP\t(S\\NP)/(S\\NP)\tsubj=agent;fwd=xcomp\n"
    "15\tTO_INF\t(S\\NP)/(S\\NP)\ttransparent\n"
    "16\tP_ARG\tPP/NP\t-\n"
    "17\tPP\tPP\t-\n"
    "18\tPREP\t(NP\\NP)/NP\t-\n"
    "19\tNMOD\tNP\\NP\t-\n"
    "20\tWH\tWH\t-\n"
    "21\tRC_THAT\tRC_THAT\t-\n"
    "22\tTV_GAP\tS_GAP\\NP\tsubj=agent;gap=theme\n"
    "23\tS_GAP\tS_GAP\t-\n"
    "24\tEMPTY\t\xE2\x88\x85\t-\n";

bool is_extension_name(std::string_view n) {
  return n == "WH" || n == "RC_THAT" || n == "TV_GAP" || n == "S_GAP";
}

}  // namespace

Category Category::atom(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::atom;
  n->text = name;
  n->atom = std::move(name);
  return Category(std::move(n));
}

Category Category::forward(Category result, Category argument) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::forward;
  n->text = wrap(result) + "/" + wrap(argument);
  n->result_cat = std::move(result);
  n->argument_cat = std::move(argument);
  return Category(std::move(n));
}

Category Category::backward(Category result, Category argument) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::backward;
  n->text = wrap(result) + "\\" + wrap(argument);
  n->result_cat = std::move(result);
  n->argument_cat = std::move(argument);
  return Category(std::move(n));
}

Category Category::parse(std::string_view text) { return CategoryParser(text).parse(); }

Category::Kind Category::kind() const { return node_->kind; }
bool Category::is_atom(std::string_view name) const { return node_->kind == Kind::atom && node_->atom == name; }
const std::string& Category::atom_name() const { return node_->atom; }
const Category& Category::result() const { return node_->result_cat; }
const Category& Category::argument() const { return node_->argument_cat; }
const std::string& Category::str() const { return node_->text; }

std::string RoleFrame::render() const {
  if (transparent) return "transparent";
  std::string out;
  auto add = [&](const std::string& kv) {
    if (!out.empty()) out += ';';
    out += kv;
  };
  if (!subject.empty()) add("subj=" + subject);
  if (!forward.empty()) {
    std::string f = "fwd=";
    for (std::size_t i = 0; i < forward.size(); ++i) f += (i ? "," : "") + forward[i];
    add(f);
  }
  if (!gap.empty()) add("gap=" + gap);
  return out.empty() ? "-" : out;
}

RoleFrame RoleFrame::parse(std::string_view text) {
  RoleFrame f;
  const std::string t = trim(text);
  if (t.empty() || t == "-") return f;
  if (t == "transparent") {
    f.transparent = true;
    return f;
  }
  for (const auto& part : split(t, ';')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw Error("bad role frame '" + t + "'");
    const std::string key = trim(std::string_view(part).substr(0, eq));
    const std::string val = trim(std::string_view(part).substr(eq + 1));
    if (key == "subj") {
      f.subject = val;
    } else if (key == "fwd") {
      for (const auto& r : split(val, ',')) f.forward.push_back(trim(r));
    } else if (key == "gap") {
      f.gap = val;
    } else {
      throw Error("bad role frame key '" + key + "'");
    }
  }
  return f;
}

StructureKind CCGType::structure() const {
  if (empty || extension) return StructureKind::special;
  switch (category.kind()) {
    case Category::Kind::forward:
      return StructureKind::forward;
    case Category::Kind::backward:
      return StructureKind::backward;
    default:
      return StructureKind::atomic;
  }
}

TypeTable TypeTable::default_table() { return parse(kDefaultTable); }

TypeTable TypeTable::parse(std::string_view text) {
  TypeTable table;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto cols = split(raw, '\t');
    if (cols.size() < 3) throw FormatError(line_no, "type table rows need id, name and structure");
    CCGType t;
    try {
      t.id = std::stoi(trim(cols[0]));
    } catch (const std::exception&) {
      throw FormatError(line_no, "bad type id");
    }
    if (t.id != table.size()) throw FormatError(line_no, "type ids must be dense and ordered");
    t.name = trim(cols[1]);
    const std::string structure = trim(cols[2]);
    t.empty = t.name == "EMPTY" || structure == kEmptySymbol;
    t.category = Category::parse(t.empty ? std::string("EMPTY") : structure);
    if (t.empty) t.category = Category::atom(std::string(kEmptySymbol));
    t.extension = is_extension_name(t.name);
    if (cols.size() > 3) t.roles = RoleFrame::parse(cols[3]);
    if (t.empty) {
      if (table.empty_id_ >= 0) throw FormatError(line_no, "duplicate EMPTY type");
      table.empty_id_ = t.id;
    }
    for (const auto& other : table.types_) {
      if (other.name == t.name) throw FormatError(line_no, "duplicate type name " + t.name);
    }
    table.types_.push_back(std::move(t));
  }
  if (table.empty_id_ < 0) throw FormatError(line_no, "type table lacks EMPTY");
  return table;
}

TypeTable TypeTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open type table " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string TypeTable::render() const {
  std::string out;
  for (const auto& t : types_) {
    out += std::to_string(t.id) + "\t" + t.name + "\t" + (t.empty ? std::string(kEmptySymbol) : t.category.str()) +
           "\t" + t.roles.render() + "\n";
  }
  return out;
}

std::uint64_t TypeTable::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : render()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

const CCGType& TypeTable::at(int id) const {
  if (id < 0 || id >= size()) throw Error("type id out of range: " + std::to_string(id));
  return types_[id];
}

std::optional<int> TypeTable::find(std::string_view name) const {
  for (const auto& t : types_) {
    if (t.name == name) return t.id;
  }
  return std::nullopt;
}

int TypeTable::id_of(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw Error("unknown type name " + std::string(name));
}

std::optional<int> TypeTable::class_of(const Category& cat) const {
  for (const auto& t : types_) {
    if (!t.empty && t.category == cat) return t.id;
  }
  return std::nullopt;
}

int TypeTable::base_count() const {
  int n = 0;
  for (const auto& t : types_) n += (!t.empty && !t.extension) ? 1 : 0;
  return n;
}

int TypeTable::extension_count() const {
  int n = 0;
  for (const auto& t : types_) n += t.extension ? 1 : 0;
  return n;
}

}  // namespace ccgnca::ccg

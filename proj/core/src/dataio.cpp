// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#include "ccgnca/dataio.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstring>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ccgnca/error.hpp"
#include "ccgnca/trajectory.hpp"

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

namespace ccgnca::data {

namespace {

std::vector<std::string> split_on(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = s.find(sep, start);
    out.emplace_back(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

std::vector<std::string> whitespace_tokens(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw FormatError(0, "truncated embedding file");
  return v;
}

}  // namespace

std::string_view split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    case Split::test: return "test";
    case Split::gen: return "gen";
  }
  return "train";
}

Split parse_split(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "dev") return Split::dev;
  if (s == "test") return Split::test;
  if (s == "gen") return Split::gen;
  throw Error("unknown split: " + std::string(s));
}

std::vector<Example> read_tsv(std::istream& in, Split split, LoadReport* report) {
  std::vector<Example> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cols = split_on(line, '\t');
    if (cols.size() < 3) throw FormatError(lineno, "expected sentence, LF and category columns");
    Example ex;
    ex.id = out.size();
    ex.sentence = whitespace_tokens(cols[0]);
    ex.lf_text = trim(cols[1]);
    ex.category = trim(cols[2]);
    ex.split = split;
    if (ex.sentence.empty()) throw FormatError(lineno, "empty sentence");
    if (ex.lf_text.empty()) throw FormatError(lineno, "empty logical form");
    if (report) {
      ++report->per_category[ex.category];
      if (cols.size() > 3) ++report->extra_column_rows;
    }
    out.push_back(std::move(ex));
  }
  if (report) {
    if (out.empty()) report->warnings.push_back("no data rows");
    if (report->extra_column_rows)
      report->warnings.push_back(std::to_string(report->extra_column_rows) + " rows carry extra columns (ignored)");
  }
  return out;
}

std::vector<Example> load_tsv(const std::filesystem::path& path, Split split, LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_tsv(in, split, report);
}

void write_tsv(const std::filesystem::path& path, std::span<const Example> examples) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& ex : examples) {
    for (std::size_t i = 0; i < ex.sentence.size(); ++i) out << (i ? " " : "") << ex.sentence[i];
    out << '\t' << ex.lf_text << '\t' << ex.category << '\n';
  }
}

// ---- trainable table

TableEmbeddings::TableEmbeddings(std::vector<std::string> vocab, nn::Mat<float> vectors)
    : vocab_(std::move(vocab)), vectors_(std::move(vectors)) {
  if (static_cast<Eigen::Index>(vocab_.size()) != vectors_.rows())
    throw Error("embedding table: vocabulary and row count differ");
  for (std::size_t i = 0; i < vocab_.size(); ++i) index_.emplace(vocab_[i], static_cast<int>(i));
}

TableEmbeddings TableEmbeddings::build(std::span<const Example> examples, int dim, std::uint64_t seed,
                                       const Lexicon& lexicon) {
  std::vector<std::string> vocab;
  std::unordered_map<std::string, int> seen;
  for (const auto& ex : examples) {
    for (const auto& tok : ccg::strip_function_words(ex.sentence, lexicon).content) {
      const std::string w = lower(tok.text);
      if (seen.emplace(w, static_cast<int>(vocab.size())).second) vocab.push_back(w);
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> n01(0.0f, 1.0f);
  nn::Mat<float> v(static_cast<Eigen::Index>(vocab.size()), dim);
  for (Eigen::Index k = 0; k < v.size(); ++k) v.data()[k] = n01(rng);
  return TableEmbeddings(std::move(vocab), std::move(v));
}

int TableEmbeddings::row_of(const std::string& word) const {
  const auto it = index_.find(lower(word));
  return it == index_.end() ? -1 : it->second;
}

std::vector<int> TableEmbeddings::rows_for(std::span<const ccg::ContentToken> content) const {
  std::vector<int> rows;
  rows.reserve(content.size());
  for (const auto& t : content) {
    const int r = row_of(t.text);
    if (r < 0) throw MissingEmbedding("word not in embedding table: " + t.text);
    rows.push_back(r);
  }
  return rows;
}

nn::Mat<float> TableEmbeddings::get(const Example&, std::span<const ccg::ContentToken> content) const {
  const auto rows = rows_for(content);
  nn::Mat<float> out(static_cast<Eigen::Index>(rows.size()), vectors_.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = vectors_.row(rows[i]);
  return out;
}

// ---- binary embedding file

EmbeddingWriter::EmbeddingWriter(const std::filesystem::path& path, int dim)
    : path_(path), tmp_(path.string() + ".tmp"), out_(tmp_, std::ios::binary | std::ios::trunc), dim_(dim) {
  if (!out_) throw Error("cannot write " + tmp_.string());
  if (dim <= 0) throw Error("embedding dim must be positive");
  out_.write("NCAE", 4);
  put<std::uint32_t>(out_, 1);
  put<std::uint64_t>(out_, 0);  // patched by finish()
  put<std::uint32_t>(out_, static_cast<std::uint32_t>(dim));
}

EmbeddingWriter::~EmbeddingWriter() {
  if (!finished_) {
    out_.close();
    std::error_code ec;
    std::filesystem::remove(tmp_, ec);
  }
}

void EmbeddingWriter::add(std::uint64_t example_id, std::uint16_t position, std::span<const float> vec) {
  if (static_cast<int>(vec.size()) != dim_) throw Error("embedding vector has wrong dimension");
  const auto offset = static_cast<std::uint64_t>(out_.tellp());
  put(out_, example_id);
  put(out_, position);
  out_.write(reinterpret_cast<const char*>(vec.data()), static_cast<std::streamsize>(vec.size() * sizeof(float)));
  index_.emplace_back(example_id, position, offset);
}

void EmbeddingWriter::finish() {
  const auto index_offset = static_cast<std::uint64_t>(out_.tellp());
  for (const auto& [id, pos, off] : index_) {
    put(out_, id);
    put(out_, pos);
    put(out_, off);
  }
  put(out_, index_offset);
  out_.write("NIDX", 4);
  out_.seekp(8);
  put<std::uint64_t>(out_, index_.size());
  out_.close();
  if (!out_) throw Error("failed writing " + tmp_.string());
  std::filesystem::rename(tmp_, path_);
  finished_ = true;
}

FileEmbeddings::FileEmbeddings(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw Error("cannot open " + path.string());
  char magic[4];
  in_.read(magic, 4);
  if (!in_ || std::memcmp(magic, "NCAE", 4) != 0) throw FormatError(0, "bad embedding file magic");
  const auto version = take<std::uint32_t>(in_);
  if (version != 1) throw FormatError(0, "unsupported embedding file version " + std::to_string(version));
  const auto count = take<std::uint64_t>(in_);
  dim_ = static_cast<int>(take<std::uint32_t>(in_));
  in_.seekg(-12, std::ios::end);
  const auto index_offset = take<std::uint64_t>(in_);
  in_.read(magic, 4);
  if (!in_ || std::memcmp(magic, "NIDX", 4) != 0) throw FormatError(0, "bad embedding index trailer");
  in_.seekg(static_cast<std::streamoff>(index_offset));
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto id = take<std::uint64_t>(in_);
    const auto pos = take<std::uint16_t>(in_);
    const auto off = take<std::uint64_t>(in_);
    offsets_[{id, pos}] = off;
  }
}

bool FileEmbeddings::contains(std::uint64_t example_id, std::uint16_t position) const {
  return offsets_.contains({example_id, position});
}

std::vector<float> FileEmbeddings::vector(std::uint64_t example_id, std::uint16_t position) const {
  const auto it = offsets_.find({example_id, position});
  if (it == offsets_.end())
    throw MissingEmbedding("no embedding for example " + std::to_string(example_id) + " position " +
                           std::to_string(position));
  std::vector<float> v(static_cast<std::size_t>(dim_));
  std::lock_guard lock(mu_);
  in_.clear();
  in_.seekg(static_cast<std::streamoff>(it->second + sizeof(std::uint64_t) + sizeof(std::uint16_t)));
  in_.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(float)));
  if (!in_) throw FormatError(0, "truncated embedding record");
  return v;
}

std::vector<std::uint16_t> FileEmbeddings::positions(std::uint64_t example_id) const {
  std::vector<std::uint16_t> out;
  for (auto it = offsets_.lower_bound({example_id, 0}); it != offsets_.end() && it->first.first == example_id; ++it)
    out.push_back(it->first.second);
  return out;
}

nn::Mat<float> FileEmbeddings::get(const Example& ex, std::span<const ccg::ContentToken> content) const {
  nn::Mat<float> out(static_cast<Eigen::Index>(content.size()), dim_);
  for (std::size_t i = 0; i < content.size(); ++i) {
    const auto v = vector(ex.id, static_cast<std::uint16_t>(content[i].position));
    out.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::RowVectorXf>(v.data(), dim_);
  }
  return out;
}

// ---- synthetic grammar

std::string SynthConfig::to_json() const {
  nlohmann::ordered_json j;
  j["train_size"] = train_size;
  j["gen_per_category"] = gen_per_category;
  j["train_pp_max"] = train_pp_max;
  j["gen_pp_min"] = gen_pp_min;
  j["gen_pp_max"] = gen_pp_max;
  j["ccomp_max"] = ccomp_max;
  j["subject_pp_category"] = subject_pp_category;
  j["wh_object_category"] = wh_object_category;
  j["nouns"] = nouns;
  j["names"] = names;
  j["prepositions"] = prepositions;
  j["intransitive"] = intransitive;
  j["transitive"] = transitive;
  j["clausal"] = clausal;
  j["train_mix"] = train_mix;
  return j.dump(2);
}

SynthConfig SynthConfig::from_json(std::string_view text) {
  SynthConfig c;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("synthetic config: ") + e.what());
  }
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  try {
    get("train_size", c.train_size);
    get("gen_per_category", c.gen_per_category);
    get("train_pp_max", c.train_pp_max);
    get("gen_pp_min", c.gen_pp_min);
    get("gen_pp_max", c.gen_pp_max);
    get("ccomp_max", c.ccomp_max);
    get("subject_pp_category", c.subject_pp_category);
    get("wh_object_category", c.wh_object_category);
    get("nouns", c.nouns);
    get("names", c.names);
    get("prepositions", c.prepositions);
    get("intransitive", c.intransitive);
    get("transitive", c.transitive);
    get("clausal", c.clausal);
    get("train_mix", c.train_mix);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("synthetic config: ") + e.what());
  }
  if (c.gen_pp_min <= c.train_pp_max) throw Error("synthetic config: gen_pp_min must exceed train_pp_max");
  if (c.gen_pp_max < c.gen_pp_min || c.train_pp_max < 0 || c.ccomp_max < 0)
    throw Error("synthetic config: bad depth range");
  if (c.nouns.empty() || c.names.empty() || c.prepositions.empty() || c.intransitive.empty() ||
      c.transitive.empty() || c.clausal.empty())
    throw Error("synthetic config: empty vocabulary list");
  if (c.train_mix.size() != 4) throw Error("synthetic config: train_mix needs 4 weights");
  return c;
}

namespace {

struct Verb {
  std::string past, base, lemma;
};

std::vector<Verb> parse_verbs(const std::vector<std::string>& specs) {
  std::vector<Verb> out;
  for (const auto& s : specs) {
    const auto p = split_on(s, '|');
    if (p.size() == 2) out.push_back({p[0], p[0], p[1]});
    else if (p.size() == 3) out.push_back({p[0], p[1], p[2]});
    else throw Error("synthetic config: bad verb entry " + s);
  }
  return out;
}

/// Accumulates tokens and LF conjuncts for one sentence.
class Sentence {
 public:
  int push(std::string w) {
    tokens_.push_back(std::move(w));
    return static_cast<int>(tokens_.size()) - 1;
  }
  static std::string var(int i) { return "x _ " + std::to_string(i); }

  /// Article + noun; returns the variable.
  std::string noun_phrase(const std::string& article, const std::string& noun) {
    push(article);
    const int i = push(noun);
    if (article == "the") definites_.push_back("* " + noun + " ( " + var(i) + " )");
    else nouns_.push_back(noun + " ( " + var(i) + " )");
    lemma_[i] = noun;
    return var(i);
  }
  std::string name(const std::string& n) {
    push(n);
    names_.insert(n);
    return n;
  }
  bool used(const std::string& n) const { return names_.contains(n); }
  /// PP chain hanging off the noun at `head`, each PP modifying the previous.
  void pp_chain(int head, int depth, std::mt19937_64& rng, const SynthConfig& c) {
    for (int d = 0; d < depth; ++d) {
      const std::string& prep = pick(c.prepositions, rng);
      push(prep);
      noun_phrase(pick_article(rng), pick(c.nouns, rng));
      const int dep = static_cast<int>(tokens_.size()) - 1;
      mods_.push_back(lemma_.at(head) + " . nmod . " + prep + " ( " + var(head) + " , " + var(dep) + " )");
      head = dep;
    }
  }
  void role(const std::string& lemma, const std::string& role, int event, const std::string& arg) {
    events_.push_back(lemma + " . " + role + " ( " + var(event) + " , " + arg + " )");
  }
  int last() const { return static_cast<int>(tokens_.size()) - 1; }

  Example finish(const std::string& category, Split split) const {
    Example ex;
    ex.sentence = tokens_;
    std::string lf;
    for (const auto& d : definites_) lf += d + " ; ";
    std::vector<std::string> conj = nouns_;
    conj.insert(conj.end(), events_.begin(), events_.end());
    conj.insert(conj.end(), mods_.begin(), mods_.end());
    for (std::size_t i = 0; i < conj.size(); ++i) lf += (i ? " AND " : "") + conj[i];
    ex.lf_text = lf;
    ex.category = category;
    ex.split = split;
    return ex;
  }

  template <typename T>
  static const T& pick(const std::vector<T>& v, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> d(0, v.size() - 1);
    return v[d(rng)];
  }
  static std::string pick_article(std::mt19937_64& rng) {
    return std::bernoulli_distribution(0.5)(rng) ? "the" : "a";
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::string> definites_, nouns_, events_, mods_;
  std::map<int, std::string> lemma_;
  std::set<std::string> names_;
};

class Generator {
 public:
  Generator(const SynthConfig& c, std::uint64_t seed)
      : c_(c), rng_(seed), iv_(parse_verbs(c.intransitive)), tv_(parse_verbs(c.transitive)),
        cv_(parse_verbs(c.clausal)) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  /// A name not yet used in `s` (constants must be unique), or empty.
  std::string fresh_name(const Sentence& s) {
    const std::string& n = Sentence::pick(c_.names, rng_);
    return s.used(n) ? std::string() : n;
  }

  /// Single-token subject: a name or article + noun.
  std::string subject(Sentence& s) {
    if (std::bernoulli_distribution(0.4)(rng_))
      if (const std::string n = fresh_name(s); !n.empty()) return s.name(n);
    return s.noun_phrase(Sentence::pick_article(rng_), Sentence::pick(c_.nouns, rng_));
  }

  /// Object noun phrase with `depth` PPs attached to it.
  std::string object(Sentence& s, int depth) {
    if (depth == 0 && std::bernoulli_distribution(0.3)(rng_))
      if (const std::string n = fresh_name(s); !n.empty()) return s.name(n);
    const std::string v = s.noun_phrase(Sentence::pick_article(rng_), Sentence::pick(c_.nouns, rng_));
    s.pp_chain(s.last(), depth, rng_, c_);
    return v;
  }

  /// Clause after its subject; returns the event index.
  int predicate(Sentence& s, const std::string& subj, int pp_depth, int ccomp_left) {
    const double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    if (ccomp_left > 0 && r < 0.3) {
      const Verb& v = Sentence::pick(cv_, rng_);
      const int e = s.push(v.past);
      s.push("that");
      const std::string inner = subject(s);
      const int ie = predicate(s, inner, pp_depth, ccomp_left - 1);
      s.role(v.lemma, "agent", e, subj);
      s.role(v.lemma, "ccomp", e, Sentence::var(ie));
      return e;
    }
    if (r < 0.6) {
      const Verb& v = Sentence::pick(tv_, rng_);
      const int e = s.push(v.past);
      const std::string obj = object(s, pp_depth);
      s.role(v.lemma, "agent", e, subj);
      s.role(v.lemma, "theme", e, obj);
      return e;
    }
    const Verb& v = Sentence::pick(iv_, rng_);
    const int e = s.push(v.past);
    s.role(v.lemma, "agent", e, subj);
    return e;
  }

  Example train_example() {
    const std::vector<double>& w = c_.train_mix;
    const int family = std::discrete_distribution<int>(w.begin(), w.end())(rng_);
    const int depth = uniform(0, c_.train_pp_max);
    Sentence s;
    switch (family) {
      case 0: {  // intransitive
        const std::string subj = subject(s);
        const Verb& v = Sentence::pick(iv_, rng_);
        s.role(v.lemma, "agent", s.push(v.past), subj);
        s.push(".");
        return s.finish("iv", Split::train);
      }
      case 1: {  // transitive with object-side PPs
        const std::string subj = subject(s);
        const Verb& v = Sentence::pick(tv_, rng_);
        const int e = s.push(v.past);
        const std::string obj = object(s, depth);
        s.role(v.lemma, "agent", e, subj);
        s.role(v.lemma, "theme", e, obj);
        s.push(".");
        return s.finish(depth ? "pp_recursion" : "tv", Split::train);
      }
      case 2: {  // sentential complement
        const std::string subj = subject(s);
        const Verb& v = Sentence::pick(cv_, rng_);
        const int e = s.push(v.past);
        s.push("that");
        const std::string inner = subject(s);
        const int ie = predicate(s, inner, depth, std::max(0, c_.ccomp_max - 1));
        s.role(v.lemma, "agent", e, subj);
        s.role(v.lemma, "ccomp", e, Sentence::var(ie));
        s.push(".");
        return s.finish("ccomp", Split::train);
      }
      default: {  // wh-subject question
        s.push("Who");
        wh_subject_body(s, depth, std::bernoulli_distribution(0.3)(rng_));
        return s.finish("wh_subject", Split::train);
      }
    }
  }

  void wh_subject_body(Sentence& s, int depth, bool intransitive) {
    if (intransitive) {
      const Verb& v = Sentence::pick(iv_, rng_);
      s.role(v.lemma, "agent", s.push(v.past), "?");
    } else {
      const Verb& v = Sentence::pick(tv_, rng_);
      const int e = s.push(v.past);
      const std::string obj = object(s, depth);
      s.role(v.lemma, "agent", e, "?");
      s.role(v.lemma, "theme", e, obj);
    }
    s.push("?");
  }

  Example pp_recursion_deep() {
    Sentence s;
    const std::string subj = subject(s);
    const Verb& v = Sentence::pick(tv_, rng_);
    const int e = s.push(v.past);
    const std::string obj = object(s, uniform(c_.gen_pp_min, c_.gen_pp_max));
    s.role(v.lemma, "agent", e, subj);
    s.role(v.lemma, "theme", e, obj);
    s.push(".");
    return s.finish("pp_recursion_deep", Split::gen);
  }

  Example wh_subject_deep_pp() {
    Sentence s;
    s.push("Who");
    wh_subject_body(s, uniform(c_.gen_pp_min, c_.gen_pp_max), false);
    return s.finish("wh_subject_deep_pp", Split::gen);
  }

  Example pp_modif_subj() {
    Sentence s;
    const std::string subj = s.noun_phrase(Sentence::pick_article(rng_), Sentence::pick(c_.nouns, rng_));
    s.pp_chain(s.last(), 1, rng_, c_);
    if (std::bernoulli_distribution(0.5)(rng_)) {
      const Verb& v = Sentence::pick(iv_, rng_);
      s.role(v.lemma, "agent", s.push(v.past), subj);
    } else {
      const Verb& v = Sentence::pick(tv_, rng_);
      const int e = s.push(v.past);
      const std::string obj = object(s, 0);
      s.role(v.lemma, "agent", e, subj);
      s.role(v.lemma, "theme", e, obj);
    }
    s.push(".");
    return s.finish("pp_modif_subj", Split::gen);
  }

  Example q_object() {
    Sentence s;
    s.push("What");
    s.push("did");
    const std::string subj = subject(s);
    const Verb& v = Sentence::pick(tv_, rng_);
    const int e = s.push(v.base);
    s.role(v.lemma, "agent", e, subj);
    s.role(v.lemma, "theme", e, "?");
    s.push("?");
    return s.finish("q_object", Split::gen);
  }

 private:
  const SynthConfig& c_;
  std::mt19937_64 rng_;
  std::vector<Verb> iv_, tv_, cv_;
};

}  // namespace

SynthCorpus gen_synthetic(const SynthConfig& config, std::uint64_t seed) {
  Generator g(config, seed);
  SynthCorpus out;
  for (int i = 0; i < config.train_size; ++i) {
    out.train.push_back(g.train_example());
    out.train.back().id = static_cast<std::uint64_t>(i);
  }
  auto add = [&](Example ex) {
    ex.id = out.gen.size();
    out.gen.push_back(std::move(ex));
  };
  for (int i = 0; i < config.gen_per_category; ++i) add(g.pp_recursion_deep());
  for (int i = 0; i < config.gen_per_category; ++i) add(g.wh_subject_deep_pp());
  if (config.subject_pp_category)
    for (int i = 0; i < config.gen_per_category; ++i) add(g.pp_modif_subj());
  if (config.wh_object_category)
    for (int i = 0; i < config.gen_per_category; ++i) add(g.q_object());
  return out;
}

}  // namespace ccgnca::data

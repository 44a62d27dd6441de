// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ccgnca/derivation.hpp"
#include "ccgnca/neural_core.hpp"

namespace ccgnca::data {

enum class Split { train, dev, test, gen };

std::string_view split_name(Split s);
Split parse_split(std::string_view s);

struct Example {
  std::uint64_t id = 0;  // 0-based row among data rows of its file
  std::vector<std::string> sentence;
  std::string lf_text;
  std::string category;
  Split split = Split::train;
};

struct LoadReport {
  std::map<std::string, std::size_t> per_category;
  std::size_t extra_column_rows = 0;
  std::vector<std::string> warnings;
};

/// Rows are sentence<TAB>LF<TAB>category; further columns are tolerated and
/// counted. Throws FormatError with the 1-based line number.
std::vector<Example> read_tsv(std::istream& in, Split split, LoadReport* report = nullptr);
std::vector<Example> load_tsv(const std::filesystem::path& path, Split split, LoadReport* report = nullptr);
void write_tsv(const std::filesystem::path& path, std::span<const Example> examples);

/// Source of encoder inputs for the content positions of one example.
class EmbeddingStore {
 public:
  virtual ~EmbeddingStore() = default;
  virtual int dim() const = 0;
  virtual bool trainable() const = 0;
  /// Rows follow `content`. Throws MissingEmbedding.
  virtual nn::Mat<float> get(const Example& ex, std::span<const ccg::ContentToken> content) const = 0;
};

/// Learnable per-word-type vectors (lower-cased surface form).
class TableEmbeddings : public EmbeddingStore {
 public:
  TableEmbeddings() = default;
  TableEmbeddings(std::vector<std::string> vocab, nn::Mat<float> vectors);
  /// Vocabulary over every content word of `examples`, vectors N(0, 1).
  static TableEmbeddings build(std::span<const Example> examples, int dim, std::uint64_t seed,
                               const Lexicon& lexicon = {});

  int dim() const override { return static_cast<int>(vectors_.cols()); }
  bool trainable() const override { return true; }
  nn::Mat<float> get(const Example& ex, std::span<const ccg::ContentToken> content) const override;

  int row_of(const std::string& word) const;  // -1 when absent
  std::vector<int> rows_for(std::span<const ccg::ContentToken> content) const;
  const std::vector<std::string>& vocab() const { return vocab_; }
  nn::Mat<float>& vectors() { return vectors_; }
  const nn::Mat<float>& vectors() const { return vectors_; }

 private:
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, int> index_;
  nn::Mat<float> vectors_;
};

/// Binary embedding file:
///   header  "NCAE" | u32 version | u64 count | u32 dim
///   records u64 example_id | u16 position | f32[dim]
///   index   count x (u64 example_id | u16 position | u64 offset)
///   trailer u64 index_offset | "NIDX"
/// All integers and floats little-endian.
class EmbeddingWriter {
 public:
  EmbeddingWriter(const std::filesystem::path& path, int dim);
  ~EmbeddingWriter();
  void add(std::uint64_t example_id, std::uint16_t position, std::span<const float> vec);
  void finish();

 private:
  std::filesystem::path path_;
  std::filesystem::path tmp_;
  std::ofstream out_;
  int dim_;
  std::vector<std::tuple<std::uint64_t, std::uint16_t, std::uint64_t>> index_;
  bool finished_ = false;
};

class FileEmbeddings : public EmbeddingStore {
 public:
  explicit FileEmbeddings(const std::filesystem::path& path);

  int dim() const override { return dim_; }
  bool trainable() const override { return false; }
  nn::Mat<float> get(const Example& ex, std::span<const ccg::ContentToken> content) const override;

  std::uint64_t count() const { return static_cast<std::uint64_t>(offsets_.size()); }
  bool contains(std::uint64_t example_id, std::uint16_t position) const;
  std::vector<float> vector(std::uint64_t example_id, std::uint16_t position) const;
  /// Positions stored for one example, ascending.
  std::vector<std::uint16_t> positions(std::uint64_t example_id) const;

 private:
  std::filesystem::path path_;
  int dim_ = 0;
  std::map<std::pair<std::uint64_t, std::uint16_t>, std::uint64_t> offsets_;
  mutable std::ifstream in_;
  mutable std::mutex mu_;
};

/// Declarative description of the synthetic mini-grammar.
struct SynthConfig {
  int train_size = 3000;
  int gen_per_category = 300;
  int train_pp_max = 2;  // object-side PP depth in train: 0..train_pp_max
  int gen_pp_min = 3;
  int gen_pp_max = 6;
  int ccomp_max = 2;
  bool subject_pp_category = true;
  bool wh_object_category = true;
  std::vector<std::string> nouns{"cat", "dog", "girl", "boy", "cake", "box", "duck", "baby", "lion", "king",
                                 "hat", "rose", "bird", "chair", "pencil", "cookie"};
  std::vector<std::string> names{"Emma", "Liam", "Noah", "Ava", "Mia", "Lucas"};
  std::vector<std::string> prepositions{"on", "in", "beside"};
  /// surface|lemma
  std::vector<std::string> intransitive{"slept|sleep", "smiled|smile", "laughed|laugh", "ran|run", "cried|cry"};
  /// past|base|lemma
  std::vector<std::string> transitive{"saw|see|see", "liked|like|like", "found|find|find", "helped|help|help",
                                      "touched|touch|touch", "painted|paint|paint"};
  std::vector<std::string> clausal{"said|say", "hoped|hope", "thought|think", "noticed|notice"};
  /// Weights of the train families: iv, tv, ccomp, wh_subject.
  std::vector<double> train_mix{0.15, 0.3, 0.2, 0.35};

  std::string to_json() const;
  static SynthConfig from_json(std::string_view text);
};

struct SynthCorpus {
  std::vector<Example> train;
  std::vector<Example> gen;
};

/// Gen categories: pp_recursion_deep, wh_subject_deep_pp, pp_modif_subj,
/// q_object (the last two withheld from train by construction).
SynthCorpus gen_synthetic(const SynthConfig& config, std::uint64_t seed);

}  // namespace ccgnca::data

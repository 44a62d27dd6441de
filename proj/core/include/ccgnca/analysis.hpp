// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
//
// Gold-structure analyses: sub-pattern labels, failure mechanisms and
// type n-gram coverage against a training index. Nothing here reads model
// output except decompose_category, which joins labels to eval records.
#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ccgnca/evaluation.hpp"
#include "ccgnca/trajectory.hpp"

namespace ccgnca::analysis {

enum class GapRole { agent, theme, recipient, none };
enum class Voice { active, passive, none };
enum class RcAttachment { main_subject, embedded, object_side, none };

std::string_view to_string(GapRole r);
std::string_view to_string(Voice v);
std::string_view to_string(RcAttachment a);

struct SubPatternLabel {
  GapRole gap_role = GapRole::none;
  Voice gap_voice = Voice::none;
  bool has_rc = false;
  RcAttachment rc_attachment = RcAttachment::none;

  /// Stable text key, e.g. "gap=agent voice=active rc=none".
  std::string key() const;
  auto operator<=>(const SubPatternLabel&) const = default;
};

/// Labels from the gold LF and trajectory (types taken from `table`).
SubPatternLabel classify_subpattern(const lf::LogicalForm& lf, const ccg::Trajectory& t,
                                    const ccg::TypeTable& table);

enum class Mechanism { A_forward_arg_extraction, B_subject_side_modifier, covered };
std::string_view to_string(Mechanism m);

/// Directed merge signature: (left category, right category, rule).
using Merge = std::tuple<std::string, std::string, ccg::Rule>;

/// Read-only index of what the training set exhibits.
class TrainCoverage {
 public:
  TrainCoverage() = default;
  void add(const ccg::Trajectory& t, const ccg::TypeTable& table);

  bool has_ngram(const std::vector<int>& gram) const;
  bool has_merge(const Merge& m) const { return merges_.contains(m); }
  /// Types a verb (lower-cased surface form) takes in training.
  const std::set<int>* verb_types(const std::string& word) const;
  std::size_t size() const { return count_; }

 private:
  std::set<std::vector<int>> ngrams_;  // n = 2 and 3
  std::set<Merge> merges_;
  std::map<std::string, std::set<int>> verb_types_;
  std::size_t count_ = 0;
};

/// Every label that applies; {covered} when neither A nor B does.
std::set<Mechanism> classify_mechanism(const ccg::Trajectory& t, const TrainCoverage& coverage,
                                       const ccg::TypeTable& table);

/// Initial-type n-grams (n in {2, 3}) of `types` missing from the index,
/// in order of first occurrence, without repeats.
std::vector<std::vector<int>> ngram_coverage(const TrainCoverage& coverage, std::span<const int> types, int n);

/// Merge signatures of `d` missing from the index.
std::vector<Merge> novel_merges(const TrainCoverage& coverage, const ccg::Derivation& d);

struct DecompositionRow {
  std::string key;
  std::size_t count = 0;
  std::size_t correct = 0;
  double accuracy = 0;  // percent
};

struct Decomposition {
  std::string category;
  std::vector<DecompositionRow> rows;  // sorted by key
  DecompositionRow all_pass;           // rows at exactly 100%
  DecompositionRow all_fail;           // rows at exactly 0%
  DecompositionRow mixed;
  DecompositionRow total;
};

/// `keys[i]` labels `records[i]`; rows group equal keys.
Decomposition decompose_category(const std::string& category, const std::vector<eval::EvalRecord>& records,
                                 const std::vector<std::string>& keys, eval::Metric metric = eval::Metric::type);

std::string render_text(const Decomposition& d);
std::string render_json(const Decomposition& d);

}  // namespace ccgnca::analysis

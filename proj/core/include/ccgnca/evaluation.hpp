// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccgnca/training.hpp"

namespace ccgnca::eval {

struct Prediction {
  std::vector<int> initial_types;
  std::vector<int> final_types;
};

/// Inference-mode encode (argmax codes) and a `T`-step rollout; T <= 0 uses
/// the model's T_max.
Prediction predict(const train::Model& model, const train::Prepared& ex, int T = 0);

struct EvalRecord {
  std::uint64_t example_id = 0;
  std::string category;
  std::vector<int> predicted_initial_types;
  std::vector<int> predicted_final_types;
  bool initial_match = false;
  bool final_match = false;
  bool type_match = false;  // initial and final both exact
  bool edge_match = false;
  bool cky_ok = false;
  std::optional<std::string> failure_note;
};

/// Scores one example. In oracle mode the gold initial types stand in for
/// the model (`model` may be null).
EvalRecord evaluate_example(const train::Model* model, const train::Prepared& ex, const ccg::TypeTable& table,
                            const Lexicon& lexicon = {}, bool oracle = false);

std::vector<EvalRecord> evaluate(const train::Model* model, const std::vector<train::Prepared>& data,
                                 const ccg::TypeTable& table, const Lexicon& lexicon = {}, bool oracle = false,
                                 int jobs = 1);

bool type_exact_match(const Prediction& p, const train::Prepared& gold);
/// Edge-set equality of the parse of `types` against the gold LF. Throws on
/// parse failure.
bool edge_exact_match(std::span<const int> types, const train::Prepared& gold, const ccg::TypeTable& table,
                      const Lexicon& lexicon = {});

enum class Metric { type, edge, initial, final };
std::string_view metric_name(Metric m);

struct CategoryRow {
  std::string category;
  std::size_t n = 0;
  double mean = 0;  // percent
  double std = 0;   // sample std across seeds, 0 for one seed
  std::vector<double> per_seed;
};

struct CategoryTable {
  Metric metric = Metric::type;
  std::vector<CategoryRow> rows;  // sorted by category
  CategoryRow overall;
};

/// `runs` holds one record list per seed, all over the same examples.
CategoryTable category_report(const std::vector<std::vector<EvalRecord>>& runs, Metric metric = Metric::type);

std::string render_text(const CategoryTable& t);
std::string render_json(const CategoryTable& t);

}  // namespace ccgnca::eval

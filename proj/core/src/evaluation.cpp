// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#include "ccgnca/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <thread>

#include <nlohmann/json.hpp>

#include "ccgnca/error.hpp"
#include "ccgnca/lf.hpp"

namespace ccgnca::eval {

namespace {

double percent(std::size_t ok, std::size_t n) { return n ? 100.0 * static_cast<double>(ok) / static_cast<double>(n) : 0.0; }

bool hit(const EvalRecord& r, Metric m) {
  switch (m) {
    case Metric::type: return r.type_match;
    case Metric::edge: return r.edge_match;
    case Metric::initial: return r.initial_match;
    case Metric::final: return r.final_match;
  }
  return false;
}

void summarize(CategoryRow& row) {
  double sum = 0;
  for (double v : row.per_seed) sum += v;
  row.mean = row.per_seed.empty() ? 0 : sum / static_cast<double>(row.per_seed.size());
  double sq = 0;
  for (double v : row.per_seed) sq += (v - row.mean) * (v - row.mean);
  row.std = row.per_seed.size() > 1 ? std::sqrt(sq / static_cast<double>(row.per_seed.size() - 1)) : 0.0;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

Prediction predict(const train::Model& model, const train::Prepared& ex, int T) {
  const nn::Mat<float> x = model.inputs(ex);
  const int steps = T > 0 ? T : model.config.T_max;
  const auto f = nn::forward<float>(model.params, x, steps, 1.0f, nn::EncodeMode::infer, nullptr);
  return {nn::argmax_rows(f.logits0), nn::argmax_rows(f.logits_final)};
}

bool type_exact_match(const Prediction& p, const train::Prepared& gold) {
  return p.initial_types == gold.initial_types && p.final_types == gold.final_types;
}

bool edge_exact_match(std::span<const int> types, const train::Prepared& gold, const ccg::TypeTable& table,
                      const Lexicon& lexicon) {
  const auto lf = lf::parse_lf(gold.lf_text);
  const auto want = lf::lf_to_edges(lf, gold.tokens);
  const auto d = ccg::cky_parse(types, table, gold.content, lexicon);
  return ccg::extract_edges(d, gold.content, table, lexicon) == want;
}

EvalRecord evaluate_example(const train::Model* model, const train::Prepared& ex, const ccg::TypeTable& table,
                            const Lexicon& lexicon, bool oracle) {
  EvalRecord r;
  r.example_id = ex.id;
  r.category = ex.category;
  Prediction p;
  if (oracle || !model) p = {ex.initial_types, ex.final_types};
  else p = predict(*model, ex);
  r.predicted_initial_types = p.initial_types;
  r.predicted_final_types = p.final_types;
  r.initial_match = p.initial_types == ex.initial_types;
  r.final_match = p.final_types == ex.final_types;
  r.type_match = r.initial_match && r.final_match;
  try {
    const auto lf = lf::parse_lf(ex.lf_text);
    const auto want = lf::lf_to_edges(lf, ex.tokens);
    const auto d = ccg::cky_parse(p.initial_types, table, ex.content, lexicon);
    r.cky_ok = true;
    r.edge_match = ccg::extract_edges(d, ex.content, table, lexicon) == want;
    if (!r.edge_match) r.failure_note = "edge mismatch";
  } catch (const Error& e) {
    r.failure_note = e.what();
  }
  return r;
}

std::vector<EvalRecord> evaluate(const train::Model* model, const std::vector<train::Prepared>& data,
                                 const ccg::TypeTable& table, const Lexicon& lexicon, bool oracle, int jobs) {
  std::vector<EvalRecord> out(data.size());
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, jobs)), data.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < data.size(); ++i) out[i] = evaluate_example(model, data[i], table, lexicon, oracle);
    return out;
  }
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < data.size(); i += workers)
        out[i] = evaluate_example(model, data[i], table, lexicon, oracle);
    });
  return out;
}

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::type: return "type_exact";
    case Metric::edge: return "edge_exact";
    case Metric::initial: return "initial_exact";
    case Metric::final: return "final_exact";
  }
  return "type_exact";
}

CategoryTable category_report(const std::vector<std::vector<EvalRecord>>& runs, Metric metric) {
  CategoryTable t;
  t.metric = metric;
  std::map<std::string, CategoryRow> rows;
  t.overall.category = "overall";
  for (const auto& run : runs) {
    if (run.size() != runs.front().size()) throw Error("category report: runs cover different example counts");
    std::map<std::string, std::pair<std::size_t, std::size_t>> counts;  // ok, n
    std::size_t ok = 0;
    for (const auto& r : run) {
      auto& c = counts[r.category];
      c.first += hit(r, metric);
      ++c.second;
      ok += hit(r, metric);
    }
    for (const auto& [cat, c] : counts) {
      auto& row = rows[cat];
      row.category = cat;
      row.n = c.second;
      row.per_seed.push_back(percent(c.first, c.second));
    }
    t.overall.n = run.size();
    t.overall.per_seed.push_back(percent(ok, run.size()));
  }
  for (auto& [cat, row] : rows) {
    summarize(row);
    t.rows.push_back(row);
  }
  summarize(t.overall);
  return t;
}

std::string render_text(const CategoryTable& t) {
  std::string out = "category                         n   " + std::string(metric_name(t.metric)) + " (mean +- std)\n";
  auto line = [&](const CategoryRow& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-28s %6zu   %6.1f +- %.1f\n", r.category.c_str(), r.n, r.mean, r.std);
    out += buf;
  };
  for (const auto& r : t.rows) line(r);
  line(t.overall);
  return out;
}

std::string render_json(const CategoryTable& t) {
  // Values rounded to 4 decimals so output is byte-stable across platforms.
  auto row_json = [](const CategoryRow& r) {
    nlohmann::ordered_json j;
    j["category"] = r.category;
    j["n"] = r.n;
    j["mean"] = nlohmann::ordered_json::parse(fixed(r.mean, 4));
    j["std"] = nlohmann::ordered_json::parse(fixed(r.std, 4));
    nlohmann::ordered_json seeds = nlohmann::ordered_json::array();
    for (double v : r.per_seed) seeds.push_back(nlohmann::ordered_json::parse(fixed(v, 4)));
    j["per_seed"] = seeds;
    return j;
  };
  nlohmann::ordered_json j;
  j["metric"] = metric_name(t.metric);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) rows.push_back(row_json(r));
  j["categories"] = rows;
  j["overall"] = row_json(t.overall);
  return j.dump(2) + "\n";
}

}  // namespace ccgnca::eval

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#include <benchmark/benchmark.h>

#include <random>

#include "ccgnca/training.hpp"

using namespace ccgnca;

namespace {

const ccg::TypeTable& types() {
  static const ccg::TypeTable t = ccg::TypeTable::default_table();
  return t;
}

/// NP TV NP (PREP NP)^depth
std::vector<int> pp_chain(int depth) {
  const int np = types().id_of("NP"), tv = types().id_of("TV"), prep = types().id_of("PREP");
  std::vector<int> out{np, tv, np};
  for (int i = 0; i < depth; ++i) {
    out.push_back(prep);
    out.push_back(np);
  }
  return out;
}

nn::Mat<float> random_inputs(int rows, int cols) {
  std::mt19937_64 rng(1);
  std::normal_distribution<float> n01;
  nn::Mat<float> x(rows, cols);
  for (Eigen::Index k = 0; k < x.size(); ++k) x.data()[k] = n01(rng);
  return x;
}

void BM_CkyParse(benchmark::State& state) {
  const auto seq = pp_chain(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ccg::cky_parse(seq, types()));
  state.SetLabel(std::to_string(seq.size()) + " tokens");
}
BENCHMARK(BM_CkyParse)->Arg(2)->Arg(6)->Arg(12);

void BM_NcaStep(benchmark::State& state) {
  nn::ModelConfig c;
  c.embed_dim = 64;
  c.H = nn::ModelConfig::hidden_for_budget(c.embed_dim, c.K, c.D, c.C);
  const auto p = nn::Params<float>::init(c, 1);
  const nn::Mat<float> s = random_inputs(static_cast<int>(state.range(0)), c.D);
  for (auto _ : state) benchmark::DoNotOptimize(nn::nca_step(p, s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NcaStep)->Arg(8)->Arg(32);

void BM_TrainStep(benchmark::State& state) {
  data::SynthConfig sc;
  sc.train_size = 32;
  sc.gen_per_category = 1;
  const auto corpus = data::gen_synthetic(sc, 1);
  nn::ModelConfig c;
  c.K = 32;
  c.D = 32;
  c.H = 64;
  c.embed_dim = 64;
  c.C = types().size();
  auto model = train::make_model(c, types(), 1, data::TableEmbeddings::build(corpus.train, c.embed_dim, 1));
  const auto set = train::prepare(corpus.train, types(), {}, &*model.table);
  std::vector<const train::Prepared*> batch;
  for (const auto& p : set.examples) batch.push_back(&p);
  nn::Params<float> grad;
  nn::Mat<float> table_grad;
  const int T = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(train::batch_gradients(batch, model, 0.5, T, nn::EncodeMode::train, {}, 1, 0, 1, grad,
                                                    &table_grad));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(batch.size()));
}
BENCHMARK(BM_TrainStep)->Arg(1)->Arg(8)->Arg(60);

}  // namespace
BENCHMARK_MAIN();

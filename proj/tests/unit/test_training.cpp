// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "ccgnca/error.hpp"
#include "ccgnca/training.hpp"
#include "doctest.h"

using namespace ccgnca;
using namespace ccgnca::train;

namespace {

const ccg::TypeTable& types() {
  static const ccg::TypeTable t = ccg::TypeTable::default_table();
  return t;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "ccgnca_test_training";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct Fixture {
  std::vector<data::Example> examples;
  data::TableEmbeddings table;
  std::vector<Prepared> prepared;
};

Fixture small_set(std::size_t n, int dim = 8) {
  Fixture f;
  data::SynthConfig sc;
  sc.train_size = static_cast<int>(n);
  sc.gen_per_category = 1;
  f.examples = data::gen_synthetic(sc, 21).train;
  f.table = data::TableEmbeddings::build(f.examples, dim, 2);
  auto set = prepare(f.examples, types(), {}, &f.table);
  REQUIRE(set.failures.empty());
  f.prepared = std::move(set.examples);
  return f;
}

nn::ModelConfig tiny(int embed_dim = 8) {
  auto c = nn::ModelConfig::test_scale(embed_dim, types().size());
  c.T_max = 3;
  return c;
}

TrainConfig quick(int epochs) {
  TrainConfig c;
  c.epochs = epochs;
  c.temp_anneal_epochs = 4;
  c.T_max = 3;
  c.batch_size = 4;
  c.seed = 5;
  c.select_best = false;
  return c;
}

}  // namespace

TEST_CASE("schedule ramps temperature and T then holds") {
  TrainConfig c;  // 1.0 -> 0.1 over 50 epochs, T 1 -> 60
  CHECK(schedule(c, 0).temperature == doctest::Approx(1.0));
  CHECK(schedule(c, 0).T == 1);
  CHECK(schedule(c, 25).temperature == doctest::Approx(std::sqrt(0.1)));
  CHECK(schedule(c, 25).T == 30);  // 1 + floor(59 * 0.5)
  CHECK(schedule(c, 50).temperature == doctest::Approx(0.1));
  CHECK(schedule(c, 50).T == 60);
  CHECK(schedule(c, 79).T == 60);
  for (int e = 1; e < 80; ++e) {
    CHECK(schedule(c, e).T >= schedule(c, e - 1).T);
    CHECK(schedule(c, e).temperature <= schedule(c, e - 1).temperature);
  }
}

TEST_CASE("train config validation") {
  CHECK_NOTHROW(TrainConfig{}.validate());
  auto bad = [](auto edit) {
    TrainConfig c;
    edit(c);
    return c;
  };
  CHECK_THROWS_AS(bad([](TrainConfig& c) { c.lr = 0; }).validate(), Error);
  CHECK_THROWS_AS(bad([](TrainConfig& c) { c.temp_end = 2; }).validate(), Error);
  CHECK_THROWS_AS(bad([](TrainConfig& c) { c.batch_size = 0; }).validate(), Error);
  CHECK_THROWS_AS(bad([](TrainConfig& c) { c.T_start = 61; }).validate(), Error);
  CHECK_THROWS_AS(bad([](TrainConfig& c) { c.loss_weights.final = -1; }).validate(), Error);
}

TEST_CASE("AdamW: decoupled decay and unit first step") {
  nn::Mat<float> p(1, 3);
  p << 1.0f, -2.0f, 0.5f;
  nn::Mat<float> g = nn::Mat<float>::Zero(1, 3);
  nn::Mat<float>* ps[] = {&p};
  const nn::Mat<float>* gs[] = {&g};
  AdamW zero_grad(0.1, 0.01);
  zero_grad.step(ps, gs);
  CHECK(p(0, 0) == doctest::Approx(1.0 * (1 - 0.1 * 0.01)));
  CHECK(p(0, 1) == doctest::Approx(-2.0 * (1 - 0.1 * 0.01)));

  nn::Mat<float> q = nn::Mat<float>::Zero(1, 3);
  nn::Mat<float> h(1, 3);
  h << 3.0f, -0.001f, 50.0f;
  nn::Mat<float>* qs[] = {&q};
  const nn::Mat<float>* hs[] = {&h};
  AdamW opt(0.01, 0.0);
  opt.step(qs, hs);
  CHECK(opt.steps() == 1);
  CHECK(q(0, 0) == doctest::Approx(-0.01).epsilon(1e-4));
  CHECK(q(0, 1) == doctest::Approx(0.01).epsilon(1e-3));
  CHECK(q(0, 2) == doctest::Approx(-0.01).epsilon(1e-4));
}

TEST_CASE("checkpoint round trip and rejection") {
  auto f = small_set(6);
  auto model = make_model(tiny(), types(), 3, f.table);
  const auto path = scratch("m.ckpt");
  save_checkpoint(path, model);
  const auto back = load_checkpoint(path, &types());
  CHECK(back.config.K == model.config.K);
  CHECK(back.config.H == model.config.H);
  CHECK(back.config.T_max == 3);
  for (int i = 0; i < nn::kTensorCount; ++i) CHECK(back.params.tensor(i) == model.params.tensor(i));
  REQUIRE(back.table.has_value());
  CHECK(back.table->vocab() == f.table.vocab());
  CHECK(back.table->vectors() == f.table.vectors());
  // Re-saving the loaded model reproduces the bytes.
  save_checkpoint(scratch("m2.ckpt"), back);
  CHECK(slurp(path) == slurp(scratch("m2.ckpt")));

  std::string text = types().render();
  text.replace(text.find("\tIV\t"), 4, "\tIV2\t");
  const auto other = ccg::TypeTable::parse(text);
  CHECK_THROWS_AS(load_checkpoint(path, &other), Error);

  std::ofstream(scratch("junk.ckpt"), std::ios::binary) << "NOPE0000";
  CHECK_THROWS_AS(load_checkpoint(scratch("junk.ckpt")), FormatError);
  std::string cut = slurp(path);
  cut.resize(cut.size() / 2);
  std::ofstream(scratch("cut.ckpt"), std::ios::binary) << cut;
  CHECK_THROWS_AS(load_checkpoint(scratch("cut.ckpt")), FormatError);

  CHECK_THROWS_AS(make_model(tiny(), ccg::TypeTable{}, 1), Error);
}

TEST_CASE("fixed seed gives identical checkpoints, regardless of jobs") {
  auto f = small_set(12);
  auto run = [&](int jobs) {
    auto model = make_model(tiny(), types(), 9, f.table);
    auto c = quick(3);
    c.jobs = jobs;
    train::train(f.prepared, model, c);
    const auto path = scratch("det" + std::to_string(jobs) + ".ckpt");
    save_checkpoint(path, model);
    return slurp(path);
  };
  const auto a = run(1);
  CHECK(a == run(1));
  CHECK(a == run(3));
}

TEST_CASE("overfits a handful of examples") {
  auto f = small_set(10, 16);
  auto cfg = tiny(16);
  cfg.K = 16;
  cfg.D = 16;
  cfg.H = 32;
  auto model = make_model(cfg, types(), 1, f.table);
  auto c = quick(1500);
  c.lr = 1e-2;
  c.weight_decay = 0;
  c.temp_anneal_epochs = 750;
  c.batch_size = 10;
  c.select_best = true;
  std::ostringstream log;
  const auto result = train::train(f.prepared, model, c, &log);
  CHECK(result.selected_epoch >= 750);
  const auto [exact, loss] = score(f.prepared, model, c.T_max);
  CHECK(exact == 1.0);
  CHECK(loss < 1e-3);
  // One JSON line per epoch.
  const std::string lines = log.str();
  CHECK(std::count(lines.begin(), lines.end(), '\n') == 1500);
}

TEST_CASE("w_final = 0 leaves the NCA weights without gradient") {
  auto f = small_set(4);
  const auto model = make_model(tiny(), types(), 6, f.table);
  std::vector<const Prepared*> batch;
  for (const auto& p : f.prepared) batch.push_back(&p);
  nn::Params<float> grad;
  nn::Mat<float> table_grad;
  batch_gradients(batch, model, 1.0, 3, nn::EncodeMode::train, {1.0, 0.0}, 1, 0, 1, grad, &table_grad);
  CHECK(grad.win_w.norm() == 0.0f);
  CHECK(grad.win_b.norm() == 0.0f);
  CHECK(grad.out_w.norm() == 0.0f);
  CHECK(grad.out_b.norm() == 0.0f);
  CHECK(grad.ln_gamma.norm() == 0.0f);
  CHECK(grad.ln_beta.norm() == 0.0f);
  CHECK(grad.readout.norm() > 0.0f);
  CHECK(grad.enc_proj.norm() > 0.0f);
  CHECK(table_grad.norm() > 0.0f);

  batch_gradients(batch, model, 1.0, 3, nn::EncodeMode::train, {1.0, 1.0}, 1, 0, 1, grad, &table_grad);
  CHECK(grad.out_w.norm() > 0.0f);
}

TEST_CASE("a zero readout scores ln C per position and term") {
  auto f = small_set(5);
  auto model = make_model(tiny(), types(), 6, f.table);
  model.params.readout.setZero();
  const double lnC = std::log(static_cast<double>(types().size()));
  CHECK(score(f.prepared, model, 2, {1.0, 0.0}).second == doctest::Approx(lnC).epsilon(1e-5));
  CHECK(score(f.prepared, model, 2, {1.0, 1.0}).second == doctest::Approx(2 * lnC).epsilon(1e-5));
}

TEST_CASE("training refuses data without supervision or inputs") {
  auto f = small_set(4);
  auto model = make_model(tiny(), types(), 1, f.table);
  CHECK_THROWS_AS(train::train({}, model, quick(1)), CoverageError);
  auto broken = f.prepared;
  broken[1].final_types.pop_back();
  CHECK_THROWS_AS(train::train(broken, model, quick(1)), CoverageError);
  auto no_table = make_model(tiny(), types(), 1);
  CHECK_THROWS_AS(train::train(f.prepared, no_table, quick(1)), CoverageError);
}

TEST_CASE("prepare reports failures instead of dropping them") {
  std::vector<data::Example> ex{{0, {"Emma", "slept", "."}, "sleep . agent ( x _ 1 , Emma )", "iv", data::Split::train},
                                {1, {"Emma", "slept", "."}, "zzz ( x _ 9 )", "iv", data::Split::train}};
  const auto set = prepare(ex, types());
  CHECK(set.examples.size() == 1);
  REQUIRE(set.failures.size() == 1);
  CHECK(set.failures[0].id == 1);
  CHECK_FALSE(set.failures[0].reason.empty());
}

TEST_CASE("example seeds differ across epoch and id") {
  CHECK(example_seed(1, 0, 0) == example_seed(1, 0, 0));
  CHECK(example_seed(1, 0, 0) != example_seed(1, 1, 0));
  CHECK(example_seed(1, 0, 0) != example_seed(1, 0, 1));
  CHECK(example_seed(1, 0, 0) != example_seed(2, 0, 0));
  EpochLog e;
  CHECK(e.to_json().find("train_exact") == std::string::npos);
  e.train_exact = 0.5;
  CHECK(e.to_json().find("\"train_exact\":0.5") != std::string::npos);
}

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#include <cmath>
#include <limits>

#include "ccgnca/error.hpp"
#include "ccgnca/neural_core.hpp"
#include "doctest.h"
#include "gradcheck.hpp"

using namespace ccgnca;
using namespace ccgnca::nn;

namespace {

Mat<double> random_mat(int r, int c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  Mat<double> m(r, c);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = n01(rng);
  return m;
}

/// Rows whose values differ between a and b.
std::vector<int> changed_rows(const Mat<double>& a, const Mat<double>& b) {
  std::vector<int> out;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if ((a.row(i) - b.row(i)).cwiseAbs().maxCoeff() > 0) out.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace

TEST_CASE("parameter budget") {
  const int h = ModelConfig::hidden_for_budget(768, 32, 64, 25);
  ModelConfig c;
  c.embed_dim = 768;
  c.H = h;
  CHECK(h == 205);
  CHECK(c.param_count() == 81101);
  CHECK(std::abs(c.param_count() - 81000) <= 0.2 * 81000);

  c.embed_dim = 64;
  c.H = ModelConfig::hidden_for_budget(64, 32, 64, 25);
  CHECK(std::abs(c.param_count() - 81000) < 300);
  CHECK(Params<float>::init(c, 1).count() == c.param_count());
}

TEST_CASE("encode: infer mode is row-wise argmax of the logits") {
  const auto cfg = ModelConfig::test_scale();
  const auto p = Params<double>::init(cfg, 3);
  const auto x = random_mat(5, cfg.embed_dim, 9);
  EncodeCache<double> cache;
  const auto s0 = encode(p, x, 1.0, EncodeMode::infer, nullptr, cache);
  const Mat<double> logits = x * p.enc_proj;
  const auto expect = argmax_rows(logits);
  CHECK(argmax_rows(cache.codes) == expect);
  CHECK(cache.codes.rowwise().sum().isOnes());
  CHECK((s0 - cache.codes * p.code_book).norm() == 0.0);
  // Seed independence.
  std::mt19937_64 a(1), b(2);
  EncodeCache<double> c1, c2;
  CHECK(encode(p, x, 0.5, EncodeMode::infer, &a, c1) == encode(p, x, 0.5, EncodeMode::infer, &b, c2));
}

TEST_CASE("encode: huge temperature gives a near-uniform soft sample") {
  const auto cfg = ModelConfig::test_scale();
  const auto p = Params<double>::init(cfg, 3);
  const auto x = random_mat(4, cfg.embed_dim, 5);
  std::mt19937_64 rng(7);
  EncodeCache<double> cache;
  encode(p, x, 1e6, EncodeMode::train, &rng, cache);
  CHECK((cache.soft.array() - 1.0 / cfg.K).abs().maxCoeff() < 1e-3);
  // Hard forward is still one-hot.
  CHECK(cache.codes.rowwise().sum().isOnes());
  CHECK(cache.codes.maxCoeff() == 1.0);
}

TEST_CASE("straight-through gradient equals the soft Jacobian path") {
  const auto cfg = ModelConfig::test_scale();
  auto p = Params<double>::init(cfg, 4);
  const auto x = random_mat(5, cfg.embed_dim, 6);
  std::mt19937_64 rng(8);
  const auto noise = gumbel_noise<double>(5, cfg.K, rng);
  const auto upstream = random_mat(5, cfg.K, 10);
  const double tau = 0.6;

  auto phi = [&](const Params<double>& q) {
    EncodeCache<double> c;
    encode(q, x, tau, EncodeMode::soft, nullptr, c, &noise);
    return (c.soft.array() * upstream.array()).sum();
  };
  EncodeCache<double> hard;
  encode(p, x, tau, EncodeMode::train, nullptr, hard, &noise);
  Params<double> grad = Params<double>::zeros(cfg);
  encode_backward<double>(p, x, hard, upstream, grad, nullptr);

  Mat<double> numeric(p.enc_proj.rows(), p.enc_proj.cols());
  const double h = 1e-5;
  for (Eigen::Index k = 0; k < numeric.size(); ++k) {
    const double keep = p.enc_proj.data()[k];
    p.enc_proj.data()[k] = keep + h;
    const double up = phi(p);
    p.enc_proj.data()[k] = keep - h;
    const double down = phi(p);
    p.enc_proj.data()[k] = keep;
    numeric.data()[k] = (up - down) / (2 * h);
  }
  CHECK((grad.enc_proj - numeric).norm() / numeric.norm() < 1e-4);
}

TEST_CASE("finite differences: every tensor, soft path, T = 1") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto pb = gradcheck::make_problem(5, 1, EncodeMode::soft, seed);
    const auto err = gradcheck::check(pb);
    for (int t = 0; t < kTensorCount; ++t) {
      CAPTURE(kTensorNames[t]);
      CHECK(err[t].relative < 1e-4);
      CHECK(err[t].analytic_norm > 0);
    }
  }
}

TEST_CASE("finite differences: detached rollout, T = 4, entering state frozen") {
  const auto pb = gradcheck::make_problem(6, 4, EncodeMode::soft, 11);
  const auto err = gradcheck::check(pb);
  for (int t = 0; t < kTensorCount; ++t) {
    CAPTURE(kTensorNames[t]);
    CHECK(err[t].relative < 1e-4);
  }
}

TEST_CASE("finite differences: hard codes, all tensors downstream of the bottleneck") {
  const auto pb = gradcheck::make_problem(6, 1, EncodeMode::train, 21);
  const auto err = gradcheck::check(pb);
  for (int t = 1; t < kTensorCount; ++t) {
    CAPTURE(kTensorNames[t]);
    CHECK(err[t].relative < 1e-4);
  }
}

TEST_CASE("nca_step: zero grid gives identical rows") {
  const auto cfg = ModelConfig::test_scale();
  const auto p = Params<double>::init(cfg, 5);
  const auto out = nca_step(p, Mat<double>::Zero(7, cfg.D).eval());
  for (Eigen::Index i = 1; i < out.rows(); ++i) CHECK((out.row(i) - out.row(0)).norm() < 1e-12);
}

TEST_CASE("nca_step: locality and the influence cone") {
  const auto cfg = ModelConfig::test_scale();
  const auto p = Params<double>::init(cfg, 6);
  const int L = 15;
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = random_mat(L, cfg.D, 100 + trial);
    const int j = trial % L;
    Mat<double> y = x;
    y.row(j).array() += 0.5;
    for (int t : {1, 3, 5}) {
      const auto a = rollout(p, x, t);
      const auto b = rollout(p, y, t);
      for (int i : changed_rows(a, b)) {
        CAPTURE(t);
        CHECK(std::abs(i - j) <= t);
      }
    }
    // One step moves exactly the neighbourhood.
    const auto ch = changed_rows(nca_step(p, x), nca_step(p, y));
    CHECK(ch.front() == std::max(0, j - 1));
    CHECK(ch.back() == std::min(L - 1, j + 1));
  }
}

TEST_CASE("rollout composition") {
  const auto cfg = ModelConfig::test_scale();
  const auto p = Params<double>::init(cfg, 7);
  const auto x = random_mat(6, cfg.D, 8);
  CHECK(rollout(p, x, 1) == nca_step(p, x));
  for (int T = 2; T <= 6; ++T) CHECK(rollout(p, x, T) == nca_step(p, rollout(p, x, T - 1)));
}

TEST_CASE("position sharing: interior positions of constant inputs commute with permutation") {
  const auto cfg = ModelConfig::test_scale();
  const auto p = Params<double>::init(cfg, 12);
  // Each single-position input is placed in the same constant context.
  const auto ctx = random_mat(1, cfg.D, 13);
  const auto a = random_mat(1, cfg.D, 14);
  const auto b = random_mat(1, cfg.D, 15);
  auto in = [&](const Mat<double>& v) {
    Mat<double> m(3, cfg.D);
    m << ctx, v, ctx;
    return nca_step(p, m).row(1).eval();
  };
  Mat<double> both(5, cfg.D);
  both << ctx, a, ctx, b, ctx;
  Mat<double> swapped(5, cfg.D);
  swapped << ctx, b, ctx, a, ctx;
  const auto o1 = nca_step(p, both);
  const auto o2 = nca_step(p, swapped);
  CHECK((o1.row(1) - in(a)).norm() < 1e-12);
  CHECK((o2.row(1) - in(b)).norm() < 1e-12);
  CHECK((o1.row(3) - o2.row(1)).norm() < 1e-12);
}

TEST_CASE("readout: no bias and no cross-position interaction") {
  const auto cfg = ModelConfig::test_scale();
  const auto p = Params<double>::init(cfg, 9);
  CHECK(readout(p, Mat<double>::Zero(4, cfg.D).eval()).isZero());
  const auto x = random_mat(4, cfg.D, 1);
  Mat<double> y = x;
  y.row(2).array() += 1.0;
  CHECK(changed_rows(readout(p, x), readout(p, y)) == std::vector<int>{2});
}

TEST_CASE("no skip path: with update weights zeroed the final state forgets state0") {
  const auto cfg = ModelConfig::test_scale();
  auto p = Params<double>::init(cfg, 10);
  p.win_w.setZero();
  p.win_b.setZero();
  p.out_w.setZero();
  p.out_b.setZero();
  const auto a = rollout(p, random_mat(5, cfg.D, 1), 3);
  const auto b = rollout(p, random_mat(5, cfg.D, 2), 3);
  CHECK(a == b);
}

TEST_CASE("loss decomposition and limits") {
  const auto cfg = ModelConfig::test_scale();
  auto p = Params<double>::init(cfg, 11);
  const auto x = random_mat(4, cfg.embed_dim, 3);
  const std::vector<int> init{1, 2, 3, 4};
  const std::vector<int> fin{24, 1, 24, 24};

  SUBCASE("uniform logits cost ln C per position") {
    p.readout.setZero();
    const auto f = forward(p, x, 2, 1.0, EncodeMode::infer, nullptr);
    const auto parts = loss_of(f, init, fin, {1.0, 0.0}, 4.0);
    CHECK(parts.total == doctest::Approx(std::log(25.0)).epsilon(1e-12));
  }

  SUBCASE("w_final = 0 leaves the update parameters without gradient") {
    std::mt19937_64 rng(1);
    const auto f = forward(p, x, 3, 0.5, EncodeMode::train, &rng);
    auto g = Params<double>::zeros(cfg);
    backward(p, x, f, init, fin, {1.0, 0.0}, 4.0, g);
    for (int t = 2; t <= 7; ++t) CHECK(g.tensor(t).isZero());
    CHECK_FALSE(g.readout.isZero());
  }

  SUBCASE("T > 1: the final loss never reaches the encoder") {
    std::mt19937_64 rng(1);
    const auto f = forward(p, x, 3, 0.5, EncodeMode::train, &rng);
    auto g = Params<double>::zeros(cfg);
    backward(p, x, f, init, fin, {0.0, 1.0}, 4.0, g);
    CHECK(g.enc_proj.isZero());
    CHECK(g.code_book.isZero());
    CHECK_FALSE(g.win_w.isZero());
  }

  SUBCASE("T = 1: the final loss does reach the encoder") {
    std::mt19937_64 rng(1);
    const auto f = forward(p, x, 1, 0.5, EncodeMode::train, &rng);
    auto g = Params<double>::zeros(cfg);
    backward(p, x, f, init, fin, {0.0, 1.0}, 4.0, g);
    CHECK_FALSE(g.enc_proj.isZero());
    CHECK_FALSE(g.code_book.isZero());
  }

  SUBCASE("a confidently correct model has vanishing gradient") {
    // Every code maps to v; the step output is the constant beta = v.
    Eigen::Matrix<double, 1, Eigen::Dynamic> v = Eigen::Matrix<double, 1, Eigen::Dynamic>::LinSpaced(cfg.D, -1, 1);
    for (Eigen::Index k = 0; k < p.code_book.rows(); ++k) p.code_book.row(k) = v;
    p.ln_gamma.setZero();
    p.ln_beta.row(0) = v;
    p.readout.setZero();
    p.readout.col(5) = 200.0 * v.transpose() / v.squaredNorm();
    const std::vector<int> all5(4, 5);
    const auto f = forward(p, x, 2, 1.0, EncodeMode::infer, nullptr);
    auto g = Params<double>::zeros(cfg);
    const auto parts = backward(p, x, f, all5, all5, {}, 4.0, g);
    CHECK(parts.total < 1e-60);
    for (int t = 0; t < kTensorCount; ++t) CHECK(g.tensor(t).cwiseAbs().maxCoeff() < 1e-60);
  }
}

TEST_CASE("numerical health over a long rollout") {
  const auto cfg = ModelConfig::test_scale();
  const auto p = Params<double>::init(cfg, 13).cast<float>();
  Mat<float> x = random_mat(20, cfg.D, 4).cast<float>();
  for (int t = 0; t < 60; ++t) {
    x = nca_step(p, x);
    REQUIRE(x.allFinite());
  }
}

TEST_CASE("non-finite parameters raise NonFinite") {
  const auto cfg = ModelConfig::test_scale();
  auto p = Params<double>::init(cfg, 14);
  p.out_w(0, 0) = std::numeric_limits<double>::quiet_NaN();
  const auto x = random_mat(3, cfg.embed_dim, 3);
  const auto f = forward(p, x, 1, 1.0, EncodeMode::infer, nullptr);
  auto g = Params<double>::zeros(cfg);
  const std::vector<int> t{0, 1, 2};
  CHECK_THROWS_AS(backward(p, x, f, t, t, {}, 3.0, g), NonFinite);
}

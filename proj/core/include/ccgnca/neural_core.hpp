// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
//
// Encoder projection, Gumbel bottleneck, width-3 NCA update and per-position
// readout. Sequences are row-major [positions x features]. All math is
// templated on the scalar so gradient checks can run in double.
#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ccgnca::nn {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct ModelConfig {
  int K = 32;  // codes
  int D = 64;  // state width
  int H = 128;
  int C = 25;  // readout classes
  int embed_dim = 64;
  int T_max = 60;

  long param_count() const;
  /// Hidden width that brings param_count() closest to `target`.
  static int hidden_for_budget(int embed_dim, int K, int D, int C, long target = 81000);
  /// D=8, K=8, H=16 profile for gradient checks.
  static ModelConfig test_scale(int embed_dim = 6, int C = 25);
};

inline constexpr int kTensorCount = 9;
inline constexpr std::array<std::string_view, kTensorCount> kTensorNames = {
    "encoder_proj", "code_book", "update_in_w", "update_in_b", "update_out_w",
    "update_out_b", "ln_gamma",  "ln_beta",     "readout"};

template <typename S>
struct Params {
  Mat<S> enc_proj;   // E x K
  Mat<S> code_book;  // K x D
  Mat<S> win_w;      // 3D x H, rows ordered [left; centre; right]
  Mat<S> win_b;      // 1 x H
  Mat<S> out_w;      // H x D
  Mat<S> out_b;      // 1 x D
  Mat<S> ln_gamma;   // 1 x D
  Mat<S> ln_beta;    // 1 x D
  Mat<S> readout;    // D x C, no bias

  static Params zeros(const ModelConfig& c);
  static Params init(const ModelConfig& c, std::uint64_t seed);

  Mat<S>& tensor(int i);
  const Mat<S>& tensor(int i) const;
  long count() const;
  void set_zero();
  void add(const Params& o, S scale = S(1));
  bool all_finite() const;

  template <typename T>
  Params<T> cast() const {
    Params<T> p;
    for (int i = 0; i < kTensorCount; ++i) p.tensor(i) = tensor(i).template cast<T>();
    return p;
  }
};

enum class EncodeMode {
  train,  // Gumbel sample, hard forward, soft gradient
  soft,   // Gumbel sample, soft forward (gradient-check path)
  infer   // argmax, no noise
};

template <typename S>
struct EncodeCache {
  Mat<S> logits;  // L x K
  Mat<S> noise;   // Gumbel(0,1), empty in infer mode
  Mat<S> soft;    // softmax((logits + noise) / temperature)
  Mat<S> codes;   // what the forward pass used
  S temperature = S(1);
  EncodeMode mode = EncodeMode::infer;
};

/// Standard Gumbel noise; deterministic for a given engine state.
template <typename S>
Mat<S> gumbel_noise(int rows, int cols, std::mt19937_64& rng);

/// Codes and state0 = codes * code_book. `noise` overrides sampling.
template <typename S>
Mat<S> encode(const Params<S>& p, const Mat<S>& x, S temperature, EncodeMode mode, std::mt19937_64* rng,
              EncodeCache<S>& cache, const Mat<S>* noise = nullptr);

template <typename S>
struct StepCache {
  Mat<S> window;  // L x 3D
  Mat<S> pre;     // L x H, before GELU
  Mat<S> act;     // L x H
  Mat<S> squash;  // L x D, tanh output
  Mat<S> xhat;    // L x D
  Eigen::Matrix<S, Eigen::Dynamic, 1> rstd;
};

/// LayerNorm(tanh(out(GELU(window3(x))))) at every position, zero padded.
template <typename S>
Mat<S> nca_step(const Params<S>& p, const Mat<S>& x, StepCache<S>* cache = nullptr);

/// T >= 1 steps. `entering` receives the state fed to the last step.
template <typename S>
Mat<S> rollout(const Params<S>& p, const Mat<S>& state0, int T, Mat<S>* entering = nullptr,
               StepCache<S>* last = nullptr);

template <typename S>
Mat<S> readout(const Params<S>& p, const Mat<S>& state);

/// Backward through one step; accumulates into `grad`, returns d(input).
template <typename S>
Mat<S> step_backward(const Params<S>& p, const StepCache<S>& cache, const Mat<S>& d_out, Params<S>& grad);

/// Straight-through backward from d(codes); accumulates encoder grads.
template <typename S>
void encode_backward(const Params<S>& p, const Mat<S>& x, const EncodeCache<S>& cache, const Mat<S>& d_codes,
                     Params<S>& grad, Mat<S>* d_x);

struct LossWeights {
  double init = 1.0;
  double final = 1.0;
};

template <typename S>
struct Forward {
  EncodeCache<S> enc;
  Mat<S> state0;
  Mat<S> logits0;
  Mat<S> entering;
  StepCache<S> step;
  Mat<S> final_state;
  Mat<S> logits_final;
  int T = 1;
};

template <typename S>
Forward<S> forward(const Params<S>& p, const Mat<S>& x, int T, S temperature, EncodeMode mode, std::mt19937_64* rng,
                   const Mat<S>* noise = nullptr);

struct LossParts {
  double total = 0;
  double ce_init = 0;  // summed over positions
  double ce_final = 0;
};

/// Cross-entropy of both supervision points, summed over positions and
/// divided by `norm`.
template <typename S>
LossParts loss_of(const Forward<S>& f, std::span<const int> initial, std::span<const int> final_types,
                  const LossWeights& w, S norm);

/// Detached-rollout backward: the final loss reaches the last step and the
/// readout; it reaches the encoder only when T == 1. Throws NonFinite.
template <typename S>
LossParts backward(const Params<S>& p, const Mat<S>& x, const Forward<S>& f, std::span<const int> initial,
                   std::span<const int> final_types, const LossWeights& w, S norm, Params<S>& grad,
                   Mat<S>* d_x = nullptr);

template <typename S>
std::vector<int> argmax_rows(const Mat<S>& logits);

}  // namespace ccgnca::nn

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#include "ccgnca/neural_core.hpp"

#include <cmath>
#include <limits>

#include "ccgnca/error.hpp"

namespace ccgnca::nn {

namespace {

constexpr double kLnEps = 1e-5;
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

template <typename S>
Mat<S> softmax_rows(const Mat<S>& z) {
  Mat<S> out(z.rows(), z.cols());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const S m = z.row(i).maxCoeff();
    out.row(i) = (z.row(i).array() - m).exp();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

template <typename S>
Mat<S> one_hot_argmax(const Mat<S>& z) {
  Mat<S> out = Mat<S>::Zero(z.rows(), z.cols());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    Eigen::Index j = 0;
    z.row(i).maxCoeff(&j);
    out(i, j) = S(1);
  }
  return out;
}

template <typename S>
S gelu(S a) {
  return S(0.5) * a * (S(1) + std::erf(a * S(kInvSqrt2)));
}

template <typename S>
S gelu_grad(S a) {
  return S(0.5) * (S(1) + std::erf(a * S(kInvSqrt2))) + a * S(kInvSqrt2Pi) * std::exp(S(-0.5) * a * a);
}

template <typename S>
Mat<S> normal(int r, int c, double stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  Mat<S> m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<S>(dist(rng));
  return m;
}

/// Summed cross-entropy and its gradient (softmax - onehot) scaled by `scale`.
template <typename S>
double cross_entropy(const Mat<S>& logits, std::span<const int> targets, S scale, Mat<S>* grad) {
  if (static_cast<Eigen::Index>(targets.size()) != logits.rows()) throw Error("target length mismatch");
  double total = 0;
  const Mat<S> p = softmax_rows(logits);
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const int t = targets[i];
    if (t < 0 || t >= logits.cols()) throw Error("target class out of range");
    const S m = logits.row(i).maxCoeff();
    const double lse = static_cast<double>(m) + std::log(static_cast<double>((logits.row(i).array() - m).exp().sum()));
    total += lse - static_cast<double>(logits(i, t));
  }
  if (grad) {
    *grad = p;
    for (Eigen::Index i = 0; i < logits.rows(); ++i) (*grad)(i, targets[i]) -= S(1);
    *grad *= scale;
  }
  return total;
}

}  // namespace

long ModelConfig::param_count() const {
  return static_cast<long>(embed_dim) * K + static_cast<long>(K) * D + 3L * D * H + H + static_cast<long>(H) * D +
         D + 2L * D + static_cast<long>(D) * C;
}

int ModelConfig::hidden_for_budget(int embed_dim, int K, int D, int C, long target) {
  ModelConfig c;
  c.embed_dim = embed_dim;
  c.K = K;
  c.D = D;
  c.C = C;
  c.H = 0;
  const long fixed = c.param_count();
  const long per_h = 3L * D + 1 + D;
  const long h = std::lround(static_cast<double>(target - fixed) / static_cast<double>(per_h));
  return static_cast<int>(std::max(1L, h));
}

ModelConfig ModelConfig::test_scale(int embed_dim, int C) {
  ModelConfig c;
  c.K = 8;
  c.D = 8;
  c.H = 16;
  c.C = C;
  c.embed_dim = embed_dim;
  c.T_max = 6;
  return c;
}

template <typename S>
Params<S> Params<S>::zeros(const ModelConfig& c) {
  Params p;
  p.enc_proj = Mat<S>::Zero(c.embed_dim, c.K);
  p.code_book = Mat<S>::Zero(c.K, c.D);
  p.win_w = Mat<S>::Zero(3 * c.D, c.H);
  p.win_b = Mat<S>::Zero(1, c.H);
  p.out_w = Mat<S>::Zero(c.H, c.D);
  p.out_b = Mat<S>::Zero(1, c.D);
  p.ln_gamma = Mat<S>::Zero(1, c.D);
  p.ln_beta = Mat<S>::Zero(1, c.D);
  p.readout = Mat<S>::Zero(c.D, c.C);
  return p;
}

template <typename S>
Params<S> Params<S>::init(const ModelConfig& c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Params p = zeros(c);
  p.enc_proj = normal<S>(c.embed_dim, c.K, 1.0 / std::sqrt(static_cast<double>(c.embed_dim)), rng);
  p.code_book = normal<S>(c.K, c.D, 1.0, rng);
  p.win_w = normal<S>(3 * c.D, c.H, 1.0 / std::sqrt(3.0 * c.D), rng);
  p.out_w = normal<S>(c.H, c.D, 1.0 / std::sqrt(static_cast<double>(c.H)), rng);
  p.ln_gamma.setOnes();
  p.readout = normal<S>(c.D, c.C, 1.0 / std::sqrt(static_cast<double>(c.D)), rng);
  return p;
}

template <typename S>
Mat<S>& Params<S>::tensor(int i) {
  return const_cast<Mat<S>&>(std::as_const(*this).tensor(i));
}

template <typename S>
const Mat<S>& Params<S>::tensor(int i) const {
  switch (i) {
    case 0:
      return enc_proj;
    case 1:
      return code_book;
    case 2:
      return win_w;
    case 3:
      return win_b;
    case 4:
      return out_w;
    case 5:
      return out_b;
    case 6:
      return ln_gamma;
    case 7:
      return ln_beta;
    case 8:
      return readout;
    default:
      throw Error("tensor index out of range");
  }
}

template <typename S>
long Params<S>::count() const {
  long n = 0;
  for (int i = 0; i < kTensorCount; ++i) n += tensor(i).size();
  return n;
}

template <typename S>
void Params<S>::set_zero() {
  for (int i = 0; i < kTensorCount; ++i) tensor(i).setZero();
}

template <typename S>
void Params<S>::add(const Params& o, S scale) {
  for (int i = 0; i < kTensorCount; ++i) tensor(i) += scale * o.tensor(i);
}

template <typename S>
bool Params<S>::all_finite() const {
  for (int i = 0; i < kTensorCount; ++i) {
    if (!tensor(i).allFinite()) return false;
  }
  return true;
}

template <typename S>
Mat<S> gumbel_noise(int rows, int cols, std::mt19937_64& rng) {
  Mat<S> g(rows, cols);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    // 53 random bits mapped into the open interval (0, 1).
    const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    g.data()[i] = static_cast<S>(-std::log(-std::log(u)));
  }
  return g;
}

template <typename S>
Mat<S> encode(const Params<S>& p, const Mat<S>& x, S temperature, EncodeMode mode, std::mt19937_64* rng,
              EncodeCache<S>& cache, const Mat<S>* noise) {
  if (!(temperature > S(0))) throw Error("temperature must be positive");
  cache.mode = mode;
  cache.temperature = temperature;
  cache.logits = x * p.enc_proj;
  if (mode == EncodeMode::infer) {
    cache.noise.resize(0, 0);
    cache.soft = softmax_rows<S>(cache.logits);
    cache.codes = one_hot_argmax<S>(cache.logits);
  } else {
    if (noise) {
      cache.noise = *noise;
    } else if (rng) {
      cache.noise = gumbel_noise<S>(static_cast<int>(x.rows()), static_cast<int>(p.enc_proj.cols()), *rng);
    } else {
      throw Error("train-mode encode needs noise or an rng");
    }
    cache.soft = softmax_rows<S>(((cache.logits + cache.noise) / temperature).eval());
    cache.codes = mode == EncodeMode::train ? one_hot_argmax<S>(cache.soft) : cache.soft;
  }
  return cache.codes * p.code_book;
}

template <typename S>
Mat<S> nca_step(const Params<S>& p, const Mat<S>& x, StepCache<S>* cache) {
  const Eigen::Index L = x.rows();
  const Eigen::Index D = x.cols();
  Mat<S> window = Mat<S>::Zero(L, 3 * D);
  for (Eigen::Index i = 0; i < L; ++i) {
    if (i > 0) window.block(i, 0, 1, D) = x.row(i - 1);
    window.block(i, D, 1, D) = x.row(i);
    if (i + 1 < L) window.block(i, 2 * D, 1, D) = x.row(i + 1);
  }
  Mat<S> pre = window * p.win_w;
  pre.rowwise() += p.win_b.row(0);
  const Mat<S> act = pre.unaryExpr([](S a) { return gelu(a); });
  Mat<S> squash = act * p.out_w;
  squash.rowwise() += p.out_b.row(0);
  squash = squash.array().tanh().matrix();

  Mat<S> xhat(L, D);
  Eigen::Matrix<S, Eigen::Dynamic, 1> rstd(L);
  for (Eigen::Index i = 0; i < L; ++i) {
    const S mu = squash.row(i).mean();
    const auto centred = (squash.row(i).array() - mu).eval();
    const S var = centred.square().mean();
    rstd(i) = S(1) / std::sqrt(var + S(kLnEps));
    xhat.row(i) = (centred * rstd(i)).matrix();
  }
  Mat<S> out = (xhat.array().rowwise() * p.ln_gamma.row(0).array()).matrix();
  out.rowwise() += p.ln_beta.row(0);
  if (cache) {
    cache->window = std::move(window);
    cache->pre = std::move(pre);
    cache->act = act;
    cache->squash = std::move(squash);
    cache->xhat = std::move(xhat);
    cache->rstd = std::move(rstd);
  }
  return out;
}

template <typename S>
Mat<S> rollout(const Params<S>& p, const Mat<S>& state0, int T, Mat<S>* entering, StepCache<S>* last) {
  if (T < 1) throw Error("rollout needs T >= 1");
  Mat<S> s = state0;
  for (int t = 1; t < T; ++t) s = nca_step(p, s);
  if (entering) *entering = s;
  return nca_step(p, s, last);
}

template <typename S>
Mat<S> readout(const Params<S>& p, const Mat<S>& state) {
  return state * p.readout;
}

template <typename S>
Mat<S> step_backward(const Params<S>& p, const StepCache<S>& c, const Mat<S>& d_out, Params<S>& grad) {
  const Eigen::Index L = d_out.rows();
  const Eigen::Index D = d_out.cols();
  grad.ln_gamma.row(0) += (d_out.array() * c.xhat.array()).colwise().sum().matrix();
  grad.ln_beta.row(0) += d_out.colwise().sum();

  Mat<S> d_squash(L, D);
  for (Eigen::Index i = 0; i < L; ++i) {
    const auto dxhat = (d_out.row(i).array() * p.ln_gamma.row(0).array()).eval();
    const S m1 = dxhat.mean();
    const S m2 = (dxhat * c.xhat.row(i).array()).mean();
    d_squash.row(i) = (c.rstd(i) * (dxhat - m1 - c.xhat.row(i).array() * m2)).matrix();
  }
  const Mat<S> d_lin = (d_squash.array() * (S(1) - c.squash.array().square())).matrix();
  grad.out_w.noalias() += c.act.transpose() * d_lin;
  grad.out_b.row(0) += d_lin.colwise().sum();
  const Mat<S> d_act = d_lin * p.out_w.transpose();
  const Mat<S> d_pre = (d_act.array() * c.pre.unaryExpr([](S a) { return gelu_grad(a); }).array()).matrix();
  grad.win_w.noalias() += c.window.transpose() * d_pre;
  grad.win_b.row(0) += d_pre.colwise().sum();
  const Mat<S> d_window = d_pre * p.win_w.transpose();

  Mat<S> d_in = d_window.block(0, D, L, D);
  for (Eigen::Index i = 0; i < L; ++i) {
    if (i > 0) d_in.row(i - 1) += d_window.block(i, 0, 1, D);
    if (i + 1 < L) d_in.row(i + 1) += d_window.block(i, 2 * D, 1, D);
  }
  return d_in;
}

template <typename S>
void encode_backward(const Params<S>& p, const Mat<S>& x, const EncodeCache<S>& c, const Mat<S>& d_codes,
                     Params<S>& grad, Mat<S>* d_x) {
  Mat<S> d_logits;
  if (c.mode == EncodeMode::infer) {
    // Argmax has no gradient path.
    d_logits = Mat<S>::Zero(c.logits.rows(), c.logits.cols());
  } else {
    // Softmax Jacobian of the soft sample, used straight through for hard codes.
    const Mat<S>& y = c.soft;
    const Eigen::Matrix<S, Eigen::Dynamic, 1> dot = (d_codes.array() * y.array()).rowwise().sum();
    d_logits = ((d_codes.colwise() - dot).array() * y.array() / c.temperature).matrix();
  }
  grad.enc_proj.noalias() += x.transpose() * d_logits;
  if (d_x) *d_x = d_logits * p.enc_proj.transpose();
}

template <typename S>
Forward<S> forward(const Params<S>& p, const Mat<S>& x, int T, S temperature, EncodeMode mode, std::mt19937_64* rng,
                   const Mat<S>* noise) {
  Forward<S> f;
  f.T = T;
  f.state0 = encode(p, x, temperature, mode, rng, f.enc, noise);
  f.logits0 = readout(p, f.state0);
  f.final_state = rollout(p, f.state0, T, &f.entering, &f.step);
  f.logits_final = readout(p, f.final_state);
  return f;
}

template <typename S>
LossParts loss_of(const Forward<S>& f, std::span<const int> initial, std::span<const int> final_types,
                  const LossWeights& w, S norm) {
  LossParts parts;
  parts.ce_init = cross_entropy<S>(f.logits0, initial, S(1), nullptr);
  parts.ce_final = cross_entropy<S>(f.logits_final, final_types, S(1), nullptr);
  parts.total = (w.init * parts.ce_init + w.final * parts.ce_final) / static_cast<double>(norm);
  return parts;
}

template <typename S>
LossParts backward(const Params<S>& p, const Mat<S>& x, const Forward<S>& f, std::span<const int> initial,
                   std::span<const int> final_types, const LossWeights& w, S norm, Params<S>& grad, Mat<S>* d_x) {
  LossParts parts;
  Mat<S> d_logits0;
  Mat<S> d_logits_final;
  parts.ce_init = cross_entropy<S>(f.logits0, initial, static_cast<S>(w.init) / norm, &d_logits0);
  parts.ce_final = cross_entropy<S>(f.logits_final, final_types, static_cast<S>(w.final) / norm, &d_logits_final);
  parts.total = (w.init * parts.ce_init + w.final * parts.ce_final) / static_cast<double>(norm);

  grad.readout.noalias() += f.state0.transpose() * d_logits0;
  grad.readout.noalias() += f.final_state.transpose() * d_logits_final;
  Mat<S> d_state0 = d_logits0 * p.readout.transpose();
  const Mat<S> d_final = d_logits_final * p.readout.transpose();
  const Mat<S> d_entering = step_backward(p, f.step, d_final, grad);
  // Detached rollout: the entering state is a constant unless it is state0.
  if (f.T == 1) d_state0 += d_entering;

  grad.code_book.noalias() += f.enc.codes.transpose() * d_state0;
  const Mat<S> d_codes = d_state0 * p.code_book.transpose();
  encode_backward(p, x, f.enc, d_codes, grad, d_x);

  if (!grad.all_finite() || !std::isfinite(parts.total) || (d_x && !d_x->allFinite())) {
    throw NonFinite("non-finite gradient");
  }
  return parts;
}

template <typename S>
std::vector<int> argmax_rows(const Mat<S>& logits) {
  std::vector<int> out(logits.rows());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    Eigen::Index j = 0;
    logits.row(i).maxCoeff(&j);
    out[i] = static_cast<int>(j);
  }
  return out;
}

#define CCGNCA_INSTANTIATE(S)                                                                                     \
  template struct Params<S>;                                                                                      \
  template Mat<S> gumbel_noise<S>(int, int, std::mt19937_64&);                                                    \
  template Mat<S> encode<S>(const Params<S>&, const Mat<S>&, S, EncodeMode, std::mt19937_64*, EncodeCache<S>&,    \
                            const Mat<S>*);                                                                       \
  template Mat<S> nca_step<S>(const Params<S>&, const Mat<S>&, StepCache<S>*);                                    \
  template Mat<S> rollout<S>(const Params<S>&, const Mat<S>&, int, Mat<S>*, StepCache<S>*);                       \
  template Mat<S> readout<S>(const Params<S>&, const Mat<S>&);                                                    \
  template Mat<S> step_backward<S>(const Params<S>&, const StepCache<S>&, const Mat<S>&, Params<S>&);             \
  template void encode_backward<S>(const Params<S>&, const Mat<S>&, const EncodeCache<S>&, const Mat<S>&,         \
                                   Params<S>&, Mat<S>*);                                                          \
  template Forward<S> forward<S>(const Params<S>&, const Mat<S>&, int, S, EncodeMode, std::mt19937_64*,           \
                                 const Mat<S>*);                                                                  \
  template LossParts loss_of<S>(const Forward<S>&, std::span<const int>, std::span<const int>, const LossWeights&, \
                                S);                                                                               \
  template LossParts backward<S>(const Params<S>&, const Mat<S>&, const Forward<S>&, std::span<const int>,        \
                                 std::span<const int>, const LossWeights&, S, Params<S>&, Mat<S>*);               \
  template std::vector<int> argmax_rows<S>(const Mat<S>&);

CCGNCA_INSTANTIATE(float)
CCGNCA_INSTANTIATE(double)

#undef CCGNCA_INSTANTIATE

}  // namespace ccgnca::nn

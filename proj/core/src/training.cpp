// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#include "ccgnca/training.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "ccgnca/error.hpp"
#include "ccgnca/lf.hpp"
#include "ccgnca/trajectory.hpp"

namespace ccgnca::train {

namespace {

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw FormatError(0, "truncated checkpoint");
  return v;
}

void put_matrix(std::ostream& out, const nn::Mat<float>& m) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.rows()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.cols()));
  out.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(float)));
}

nn::Mat<float> take_matrix(std::istream& in) {
  const auto r = take<std::uint32_t>(in);
  const auto c = take<std::uint32_t>(in);
  nn::Mat<float> m(r, c);
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(float)));
  if (!in) throw FormatError(0, "truncated checkpoint tensor");
  return m;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, jobs)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = n;
      }
    });
  }
  pool.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

PreparedSet prepare(std::span<const data::Example> examples, const ccg::TypeTable& table, const Lexicon& lexicon,
                    const data::EmbeddingStore* store) {
  PreparedSet out;
  const auto* tab = dynamic_cast<const data::TableEmbeddings*>(store);
  for (const auto& ex : examples) {
    try {
      const auto lf = lf::parse_lf(ex.lf_text);
      auto traj = ccg::build_trajectory(lf, ex.sentence, table, lexicon);
      Prepared p;
      p.id = ex.id;
      p.category = ex.category;
      p.tokens = ex.sentence;
      p.lf_text = ex.lf_text;
      p.content = std::move(traj.content_tokens);
      p.initial_types = std::move(traj.initial_types);
      p.final_types = std::move(traj.final_types);
      if (tab) p.table_rows = tab->rows_for(p.content);
      else if (store) p.inputs = store->get(ex, p.content);
      out.examples.push_back(std::move(p));
    } catch (const Error& e) {
      out.failures.push_back({ex.id, ex.category, e.what()});
    }
  }
  return out;
}

nn::Mat<float> Model::inputs(const Prepared& p) const {
  if (!table) {
    if (p.inputs.rows() != static_cast<Eigen::Index>(p.content.size()) || p.inputs.cols() != config.embed_dim)
      throw MissingEmbedding("no encoder input for example " + std::to_string(p.id));
    return p.inputs;
  }
  std::vector<int> rows = p.table_rows;
  if (rows.size() != p.content.size()) rows = table->rows_for(p.content);
  nn::Mat<float> x(static_cast<Eigen::Index>(rows.size()), table->dim());
  for (std::size_t i = 0; i < rows.size(); ++i) x.row(static_cast<Eigen::Index>(i)) = table->vectors().row(rows[i]);
  return x;
}

Model make_model(const nn::ModelConfig& config, const ccg::TypeTable& types, std::uint64_t seed,
                 std::optional<data::TableEmbeddings> table) {
  if (config.C != types.size()) throw Error("model class count differs from the type table");
  if (table && table->dim() != config.embed_dim) throw Error("embedding table dim differs from embed_dim");
  Model m;
  m.config = config;
  m.params = nn::Params<float>::init(config, seed);
  m.table = std::move(table);
  m.type_table_hash = types.hash();
  return m;
}

void save_checkpoint(const std::filesystem::path& path, const Model& model) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write("CGNC", 4);
    put<std::uint32_t>(out, 1);
    const auto& c = model.config;
    for (int v : {c.K, c.D, c.H, c.C, c.embed_dim, c.T_max}) put<std::uint32_t>(out, static_cast<std::uint32_t>(v));
    put<std::uint64_t>(out, model.type_table_hash);
    put<std::uint32_t>(out, nn::kTensorCount);
    for (int i = 0; i < nn::kTensorCount; ++i) put_matrix(out, model.params.tensor(i));
    put<std::uint8_t>(out, model.table ? 1 : 0);
    if (model.table) {
      put<std::uint32_t>(out, static_cast<std::uint32_t>(model.table->vocab().size()));
      for (const auto& w : model.table->vocab()) {
        put<std::uint32_t>(out, static_cast<std::uint32_t>(w.size()));
        out.write(w.data(), static_cast<std::streamsize>(w.size()));
      }
      put_matrix(out, model.table->vectors());
    }
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Model load_checkpoint(const std::filesystem::path& path, const ccg::TypeTable* types) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "CGNC", 4) != 0) throw FormatError(0, "not a checkpoint: bad magic");
  const auto version = take<std::uint32_t>(in);
  if (version != 1) throw FormatError(0, "unsupported checkpoint version " + std::to_string(version));
  Model m;
  auto& c = m.config;
  for (int* f : {&c.K, &c.D, &c.H, &c.C, &c.embed_dim, &c.T_max}) *f = static_cast<int>(take<std::uint32_t>(in));
  m.type_table_hash = take<std::uint64_t>(in);
  if (types && types->hash() != m.type_table_hash) throw Error("checkpoint was trained with a different type table");
  if (take<std::uint32_t>(in) != nn::kTensorCount) throw FormatError(0, "unexpected tensor count");
  const auto shapes = nn::Params<float>::zeros(c);
  for (int i = 0; i < nn::kTensorCount; ++i) {
    m.params.tensor(i) = take_matrix(in);
    if (m.params.tensor(i).rows() != shapes.tensor(i).rows() || m.params.tensor(i).cols() != shapes.tensor(i).cols())
      throw FormatError(0, "tensor " + std::string(nn::kTensorNames[static_cast<std::size_t>(i)]) + " has wrong shape");
  }
  if (take<std::uint8_t>(in)) {
    const auto n = take<std::uint32_t>(in);
    std::vector<std::string> vocab(n);
    for (auto& w : vocab) {
      w.resize(take<std::uint32_t>(in));
      in.read(w.data(), static_cast<std::streamsize>(w.size()));
    }
    m.table.emplace(std::move(vocab), take_matrix(in));
  }
  return m;
}

void TrainConfig::validate() const {
  if (!(lr > 0) || !(weight_decay >= 0)) throw Error("train config: lr must be positive, weight_decay non-negative");
  if (!(temp_end > 0) || !(temp_end < temp_start)) throw Error("train config: need 0 < temp_end < temp_start");
  if (temp_anneal_epochs <= 0 || epochs <= 0 || batch_size <= 0 || jobs <= 0)
    throw Error("train config: epochs, anneal window, batch size and jobs must be positive");
  if (T_start < 1 || T_start > T_max) throw Error("train config: need 1 <= T_start <= T_max");
  if (loss_weights.init < 0 || loss_weights.final < 0) throw Error("train config: negative loss weight");
}

Schedule schedule(const TrainConfig& c, int epoch) {
  const double frac = std::clamp(static_cast<double>(epoch) / c.temp_anneal_epochs, 0.0, 1.0);
  Schedule s;
  s.temperature = c.temp_start * std::pow(c.temp_end / c.temp_start, frac);
  s.T = c.T_start + static_cast<int>(std::floor((c.T_max - c.T_start) * frac + 1e-9));
  return s;
}

AdamW::AdamW(double lr, double weight_decay, double beta1, double beta2, double eps)
    : lr_(lr), wd_(weight_decay), b1_(beta1), b2_(beta2), eps_(eps) {}

void AdamW::step(std::span<nn::Mat<float>* const> params, std::span<const nn::Mat<float>* const> grads) {
  if (params.size() != grads.size()) throw Error("AdamW: parameter and gradient lists differ");
  if (m_.empty()) {
    for (const auto* p : params) {
      m_.push_back(nn::Mat<float>::Zero(p->rows(), p->cols()));
      v_.push_back(nn::Mat<float>::Zero(p->rows(), p->cols()));
    }
  }
  ++t_;
  const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = *params[i];
    const auto& g = *grads[i];
    auto& m = m_[i];
    auto& v = v_[i];
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      const double gk = g.data()[k];
      const double mk = b1_ * m.data()[k] + (1 - b1_) * gk;
      const double vk = b2_ * v.data()[k] + (1 - b2_) * gk * gk;
      m.data()[k] = static_cast<float>(mk);
      v.data()[k] = static_cast<float>(vk);
      double pk = p.data()[k] * (1.0 - lr_ * wd_);
      pk -= lr_ * (mk / c1) / (std::sqrt(vk / c2) + eps_);
      p.data()[k] = static_cast<float>(pk);
    }
  }
}

std::string EpochLog::to_json() const {
  nlohmann::ordered_json j;
  j["epoch"] = epoch;
  j["loss"] = loss;
  j["initial_accuracy"] = initial_accuracy;
  j["final_accuracy"] = final_accuracy;
  j["temperature"] = temperature;
  j["T"] = T;
  if (train_exact >= 0) j["train_exact"] = train_exact;
  return j.dump();
}

std::uint64_t example_seed(std::uint64_t seed, int epoch, std::uint64_t id) {
  return splitmix(splitmix(splitmix(seed) ^ static_cast<std::uint64_t>(epoch)) ^ id);
}

nn::LossParts batch_gradients(const std::vector<const Prepared*>& batch, const Model& model, double temperature,
                              int T, nn::EncodeMode mode, const nn::LossWeights& w, std::uint64_t seed, int epoch,
                              int jobs, nn::Params<float>& grad, nn::Mat<float>* table_grad,
                              std::vector<nn::Forward<float>>* forwards) {
  std::size_t positions = 0;
  for (const auto* p : batch) positions += p->content.size();
  const auto norm = static_cast<float>(std::max<std::size_t>(positions, 1));

  struct Slot {
    nn::Params<float> grad;
    nn::Mat<float> d_x;
    nn::LossParts parts;
    nn::Forward<float> f;
  };
  std::vector<Slot> slots(batch.size());
  const bool want_dx = table_grad && model.table;
  parallel_for(batch.size(), jobs, [&](std::size_t i) {
    const Prepared& ex = *batch[i];
    Slot& s = slots[i];
    const nn::Mat<float> x = model.inputs(ex);
    std::mt19937_64 rng(example_seed(seed, epoch, ex.id));
    s.f = nn::forward<float>(model.params, x, T, static_cast<float>(temperature), mode, &rng);
    s.grad = nn::Params<float>::zeros(model.config);
    s.parts = nn::backward<float>(model.params, x, s.f, ex.initial_types, ex.final_types, w, norm, s.grad,
                                  want_dx ? &s.d_x : nullptr);
  });

  // Fixed-order reduction keeps results independent of `jobs`.
  grad = nn::Params<float>::zeros(model.config);
  if (table_grad && model.table) table_grad->setZero(model.table->vectors().rows(), model.table->vectors().cols());
  nn::LossParts total;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    grad.add(slots[i].grad);
    total.total += slots[i].parts.total;
    total.ce_init += slots[i].parts.ce_init;
    total.ce_final += slots[i].parts.ce_final;
    if (want_dx) {
      const std::vector<int> rows =
          batch[i]->table_rows.size() == batch[i]->content.size() ? batch[i]->table_rows
                                                                  : model.table->rows_for(batch[i]->content);
      for (std::size_t r = 0; r < rows.size(); ++r)
        table_grad->row(rows[r]) += slots[i].d_x.row(static_cast<Eigen::Index>(r));
    }
  }
  if (forwards) {
    forwards->clear();
    for (auto& s : slots) forwards->push_back(std::move(s.f));
  }
  return total;
}

std::pair<double, double> score(const std::vector<Prepared>& data, const Model& model, int T,
                                const nn::LossWeights& w) {
  std::size_t exact = 0, positions = 0;
  double loss = 0;
  for (const auto& p : data) {
    const auto f = nn::forward<float>(model.params, model.inputs(p), T, 1.0f, nn::EncodeMode::infer, nullptr);
    exact += nn::argmax_rows(f.logits0) == p.initial_types && nn::argmax_rows(f.logits_final) == p.final_types;
    loss += nn::loss_of<float>(f, p.initial_types, p.final_types, w, 1.0f).total;
    positions += p.content.size();
  }
  return {data.empty() ? 0.0 : static_cast<double>(exact) / static_cast<double>(data.size()),
          positions ? loss / static_cast<double>(positions) : 0.0};
}

TrainResult train(const std::vector<Prepared>& data, Model& model, const TrainConfig& config, std::ostream* log,
                  const std::function<void(const EpochLog&)>& on_epoch) {
  config.validate();
  if (data.empty()) throw CoverageError("no trajectorized training examples");
  for (const auto& p : data) {
    if (p.initial_types.size() != p.content.size() || p.final_types.size() != p.content.size() || p.content.empty())
      throw CoverageError("example " + std::to_string(p.id) + " lacks a trajectory");
    if (!model.table && p.inputs.rows() != static_cast<Eigen::Index>(p.content.size()))
      throw CoverageError("example " + std::to_string(p.id) + " lacks encoder inputs");
  }
  model.config.T_max = config.T_max;

  std::vector<nn::Mat<float>*> params;
  for (int i = 0; i < nn::kTensorCount; ++i) params.push_back(&model.params.tensor(i));
  if (model.table) params.push_back(&model.table->vectors());
  AdamW opt(config.lr, config.weight_decay);

  std::vector<std::size_t> order(data.size());
  TrainResult out;
  std::optional<Model> best;
  std::pair<double, double> best_score{-1.0, 0.0};
  nn::Params<float> grad;
  nn::Mat<float> table_grad;
  std::vector<nn::Forward<float>> forwards;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const Schedule s = schedule(config, epoch);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 shuffle_rng(example_seed(config.seed, epoch, ~0ull));
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double loss_sum = 0;
    std::size_t positions = 0, init_ok = 0, final_ok = 0;
    for (std::size_t b = 0; b < order.size(); b += static_cast<std::size_t>(config.batch_size)) {
      std::vector<const Prepared*> batch;
      std::size_t batch_positions = 0;
      for (std::size_t k = b; k < std::min(order.size(), b + static_cast<std::size_t>(config.batch_size)); ++k) {
        batch.push_back(&data[order[k]]);
        batch_positions += data[order[k]].content.size();
      }
      const auto parts = batch_gradients(batch, model, s.temperature, s.T, nn::EncodeMode::train,
                                         config.loss_weights, config.seed, epoch, config.jobs, grad, &table_grad,
                                         &forwards);
      loss_sum += parts.total * static_cast<double>(batch_positions);
      positions += batch_positions;
      for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto pi = nn::argmax_rows(forwards[i].logits0);
        const auto pf = nn::argmax_rows(forwards[i].logits_final);
        for (std::size_t j = 0; j < pi.size(); ++j) {
          init_ok += pi[j] == batch[i]->initial_types[j];
          final_ok += pf[j] == batch[i]->final_types[j];
        }
      }
      std::vector<const nn::Mat<float>*> grads;
      for (int i = 0; i < nn::kTensorCount; ++i) grads.push_back(&grad.tensor(i));
      if (model.table) grads.push_back(&table_grad);
      opt.step(params, grads);
    }
    EpochLog e;
    e.epoch = epoch;
    e.loss = loss_sum / static_cast<double>(positions);
    e.initial_accuracy = static_cast<double>(init_ok) / static_cast<double>(positions);
    e.final_accuracy = static_cast<double>(final_ok) / static_cast<double>(positions);
    e.temperature = s.temperature;
    e.T = s.T;
    if (config.select_best && s.T == config.T_max) {
      const auto sc = score(data, model, s.T, config.loss_weights);
      e.train_exact = sc.first;
      if (sc.first > best_score.first || (sc.first == best_score.first && sc.second < best_score.second)) {
        best_score = sc;
        best = model;
        out.selected_epoch = epoch;
      }
    }
    if (log) *log << e.to_json() << '\n' << std::flush;
    if (on_epoch) on_epoch(e);
    out.log.push_back(e);
  }
  if (best) model = std::move(*best);
  else out.selected_epoch = config.epochs - 1;
  return out;
}

}  // namespace ccgnca::train

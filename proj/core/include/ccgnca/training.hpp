// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ccgnca/ccg_types.hpp"
#include "ccgnca/dataio.hpp"
#include "ccgnca/lexicon.hpp"
#include "ccgnca/neural_core.hpp"

namespace ccgnca::train {

/// An example with its supervision attached.
struct Prepared {
  std::uint64_t id = 0;
  std::string category;
  std::vector<std::string> tokens;
  std::string lf_text;
  std::vector<ccg::ContentToken> content;
  std::vector<int> initial_types;
  std::vector<int> final_types;
  std::vector<int> table_rows;  // trainable-table mode
  nn::Mat<float> inputs;        // file mode
};

struct CoverageFailure {
  std::uint64_t id = 0;
  std::string category;
  std::string reason;
};

struct PreparedSet {
  std::vector<Prepared> examples;
  std::vector<CoverageFailure> failures;
};

/// Trajectorizes every example; failures are reported, never dropped
/// silently. With `store` set, inputs are fetched (file mode) or table rows
/// resolved (table mode).
PreparedSet prepare(std::span<const data::Example> examples, const ccg::TypeTable& table,
                     const Lexicon& lexicon = {}, const data::EmbeddingStore* store = nullptr);

struct Model {
  nn::ModelConfig config;
  nn::Params<float> params;
  std::optional<data::TableEmbeddings> table;  // present in trainable-table mode
  std::uint64_t type_table_hash = 0;

  /// Encoder input for one example.
  nn::Mat<float> inputs(const Prepared& p) const;
};

/// Fresh model. `table` switches to trainable-table mode.
Model make_model(const nn::ModelConfig& config, const ccg::TypeTable& types, std::uint64_t seed,
                 std::optional<data::TableEmbeddings> table = std::nullopt);

/// Versioned binary checkpoint, written to a temp file and renamed.
///   "CGNC" | u32 version | u32 K, D, H, C, embed_dim, T_max | u64 type-table hash
///   u32 tensor count, then per tensor: u32 rows | u32 cols | f32 data
///   u8 has_table [| u32 vocab | (u32 len, bytes)* | u32 rows | u32 cols | f32 data]
void save_checkpoint(const std::filesystem::path& path, const Model& model);
/// Throws FormatError; Error when `types` is given and its hash differs.
Model load_checkpoint(const std::filesystem::path& path, const ccg::TypeTable* types = nullptr);

struct TrainConfig {
  double lr = 1e-3;
  double weight_decay = 1e-4;
  double temp_start = 1.0;
  double temp_end = 0.1;
  int temp_anneal_epochs = 50;
  int T_start = 1;
  int T_max = 60;
  int epochs = 80;
  int batch_size = 32;
  std::uint64_t seed = 0;
  nn::LossWeights loss_weights;
  int jobs = 1;
  /// Once T reaches T_max, score each epoch's parameters on the training
  /// set (inference mode) and keep the best.
  bool select_best = true;

  void validate() const;  // throws Error
};

struct Schedule {
  double temperature = 1.0;
  int T = 1;
};

/// Geometric temperature and linear integer T ramp over the anneal window,
/// held afterwards.
Schedule schedule(const TrainConfig& c, int epoch);

/// AdamW with decoupled weight decay over a fixed list of tensors.
class AdamW {
 public:
  AdamW(double lr, double weight_decay, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
  void step(std::span<nn::Mat<float>* const> params, std::span<const nn::Mat<float>* const> grads);
  long steps() const { return t_; }

 private:
  double lr_, wd_, b1_, b2_, eps_;
  long t_ = 0;
  std::vector<nn::Mat<float>> m_, v_;
};

struct EpochLog {
  int epoch = 0;
  double loss = 0;  // per content position
  double initial_accuracy = 0;
  double final_accuracy = 0;
  double temperature = 0;
  int T = 0;
  double train_exact = -1;  // inference-mode type exact match, when scored

  std::string to_json() const;
};

/// Per-example noise stream, independent of thread scheduling.
std::uint64_t example_seed(std::uint64_t seed, int epoch, std::uint64_t id);

struct TrainResult {
  std::vector<EpochLog> log;
  int selected_epoch = -1;  // epoch whose parameters the model holds
};

/// Inference-mode type exact match over `data` (fraction) and mean loss per
/// content position.
std::pair<double, double> score(const std::vector<Prepared>& data, const Model& model, int T,
                                const nn::LossWeights& w = {});

/// Trains in place. Throws CoverageError when `data` is empty or any
/// example lacks inputs. Each epoch appends one JSON line to `log`.
TrainResult train(const std::vector<Prepared>& data, Model& model, const TrainConfig& config,
                            std::ostream* log = nullptr,
                            const std::function<void(const EpochLog&)>& on_epoch = {});

/// Batch loss and gradients (mean over content positions). `grad` and
/// `table_grad` are overwritten.
nn::LossParts batch_gradients(const std::vector<const Prepared*>& batch, const Model& model, double temperature,
                              int T, nn::EncodeMode mode, const nn::LossWeights& w, std::uint64_t seed, int epoch,
                              int jobs, nn::Params<float>& grad, nn::Mat<float>* table_grad,
                              std::vector<nn::Forward<float>>* forwards = nullptr);

}  // namespace ccgnca::train

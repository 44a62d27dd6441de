// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccgnca/training.hpp"

namespace ccgnca::cli {

struct Common {
  std::string type_table;  // empty: built-in table
  std::string lexicon;     // empty: built-in function-word list
  std::string format = "text";
  int jobs = 1;
};

struct DeriveOptions {
  std::string data;
  std::string split = "train";
  std::string out;
  std::string manifest;
  std::string funcwords_out;
};

struct ModelOptions {
  std::string profile = "full";  // full | desk
  int K = 0, D = 0, H = 0, embed_dim = 0, T_max = 0, epochs = 0, anneal = 0, batch_size = 0;
  double lr = 0, weight_decay = -1, w_init = -1, w_final = -1;
  bool no_select_best = false;
};

struct TrainOptions {
  std::string data;
  std::vector<std::string> vocab_data;
  std::string embeddings = "table";
  std::optional<std::uint64_t> seed;
  std::vector<std::uint64_t> seeds;
  std::string out;
  std::string log;
  ModelOptions model;
};

struct EvalOptions {
  std::string data;
  std::vector<std::string> checkpoints;
  std::string embeddings;
  bool oracle = false;
  std::string metric = "type";
  std::string records_out;
};

struct AnalyzeOptions {
  std::string data;
  std::string train;
  std::string records;
  std::string category;
  std::string metric = "type";
};

struct SynthOptions {
  std::string config;
  std::uint64_t seed = 0;
  std::string out_dir;
};

struct AuditOptions {
  std::string data;
  std::string split = "gen";
  int show = 20;
};

int derive(const Common& c, const DeriveOptions& o);
int train(const Common& c, const TrainOptions& o);
int eval(const Common& c, const EvalOptions& o);
int analyze(const Common& c, const AnalyzeOptions& o);
int synth(const Common& c, const SynthOptions& o);
int audit(const Common& c, const AuditOptions& o);

/// Resolves profile defaults and explicit overrides.
std::pair<nn::ModelConfig, train::TrainConfig> resolve(const ModelOptions& m, int C, int file_embed_dim);

/// FNV-1a 64 over bytes, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace ccgnca::cli

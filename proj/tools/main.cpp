// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "ccgnca/error.hpp"
#include "commands.hpp"

using namespace ccgnca::cli;

namespace {

void add_common(CLI::App* app, Common& c) {
  app->add_option("--type-table", c.type_table, "Type table file (default: built-in)")->check(CLI::ExistingFile);
  app->add_option("--lexicon", c.lexicon, "Function-word JSON (default: built-in)")->check(CLI::ExistingFile);
  app->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"text", "json"}));
  app->add_option("--jobs", c.jobs, "Example-level worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CCG-supervised neural cellular automaton toolkit"};
  app.require_subcommand(1);

  Common common;
  common.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  DeriveOptions derive_o;
  auto* derive_cmd = app.add_subcommand("derive", "Trajectorize a TSV and write a coverage manifest");
  add_common(derive_cmd, common);
  derive_cmd->add_option("--data", derive_o.data, "Input TSV")->required()->check(CLI::ExistingFile);
  derive_cmd->add_option("--split", derive_o.split, "train | dev | test | gen");
  derive_cmd->add_option("--out", derive_o.out, "Trajectory JSONL output");
  derive_cmd->add_option("--manifest", derive_o.manifest, "Coverage manifest (default: OUT.manifest.json)");
  derive_cmd->add_option("--funcwords-out", derive_o.funcwords_out, "Write the function-word JSON sidecar");

  TrainOptions train_o;
  std::uint64_t train_seed = 0;
  auto* train_cmd = app.add_subcommand("train", "Train one model per seed");
  add_common(train_cmd, common);
  train_cmd->add_option("--data", train_o.data, "Training TSV")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--vocab-data", train_o.vocab_data, "Extra TSVs whose words join the embedding table")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--embeddings", train_o.embeddings, "table | file:PATH");
  auto* seed_opt = train_cmd->add_option("--seed", train_seed, "Seed for all randomness");
  train_cmd->add_option("--seeds", train_o.seeds, "Comma-separated seeds")->delimiter(',')->excludes(seed_opt);
  train_cmd->add_option("--out", train_o.out, "Checkpoint path (a directory with --seeds)")->required();
  train_cmd->add_option("--log", train_o.log, "JSONL log path (default: CHECKPOINT.log.jsonl)");
  auto& m = train_o.model;
  train_cmd->add_option("--profile", m.profile, "full | desk")->check(CLI::IsMember({"full", "desk"}));
  train_cmd->add_option("--K", m.K, "Codes");
  train_cmd->add_option("--D", m.D, "State width");
  train_cmd->add_option("--H", m.H, "Hidden width (default: from the parameter budget)");
  train_cmd->add_option("--embed-dim", m.embed_dim, "Table embedding width");
  train_cmd->add_option("--T-max", m.T_max, "Final rollout length");
  train_cmd->add_option("--epochs", m.epochs);
  train_cmd->add_option("--anneal-epochs", m.anneal, "Temperature and T ramp length");
  train_cmd->add_option("--batch-size", m.batch_size);
  train_cmd->add_option("--lr", m.lr);
  train_cmd->add_option("--weight-decay", m.weight_decay);
  train_cmd->add_option("--w-init", m.w_init, "Initial-type loss weight");
  train_cmd->add_option("--w-final", m.w_final, "Final-type loss weight");
  train_cmd->add_flag("--no-select-best", m.no_select_best, "Keep the last epoch instead of the best");

  EvalOptions eval_o;
  auto* eval_cmd = app.add_subcommand("eval", "Per-category accuracy tables");
  add_common(eval_cmd, common);
  eval_cmd->add_option("--data", eval_o.data, "Evaluation TSV")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--checkpoint", eval_o.checkpoints, "Checkpoint(s), one per seed")
      ->delimiter(',')
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--embeddings", eval_o.embeddings, "file:PATH for checkpoints without a table");
  eval_cmd->add_flag("--oracle-types", eval_o.oracle, "Score gold types through the symbolic pipeline");
  eval_cmd->add_option("--metric", eval_o.metric, "type | edge | initial | final")
      ->check(CLI::IsMember({"type", "edge", "initial", "final"}));
  eval_cmd->add_option("--records-out", eval_o.records_out, "Per-example JSONL records");

  AnalyzeOptions analyze_o;
  auto* analyze_cmd = app.add_subcommand("analyze", "Sub-pattern, mechanism and n-gram reports");
  add_common(analyze_cmd, common);
  analyze_cmd->add_option("--data", analyze_o.data, "Evaluation TSV the records refer to")
      ->required()
      ->check(CLI::ExistingFile);
  analyze_cmd->add_option("--train", analyze_o.train, "Training TSV")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--records", analyze_o.records, "JSONL from eval --records-out")
      ->required()
      ->check(CLI::ExistingFile);
  analyze_cmd->add_option("--category", analyze_o.category, "Restrict to one category");
  analyze_cmd->add_option("--metric", analyze_o.metric, "type | edge | initial | final")
      ->check(CLI::IsMember({"type", "edge", "initial", "final"}));

  SynthOptions synth_o;
  auto* synth_cmd = app.add_subcommand("synth", "Generate the synthetic corpus");
  add_common(synth_cmd, common);
  synth_cmd->add_option("--config", synth_o.config, "Grammar config JSON")->check(CLI::ExistingFile);
  synth_cmd->add_option("--seed", synth_o.seed);
  synth_cmd->add_option("--out-dir", synth_o.out_dir, "Directory for train.tsv, gen.tsv, config.json")->required();

  AuditOptions audit_o;
  auto* audit_cmd = app.add_subcommand("audit", "Gold-type pipeline fidelity report");
  add_common(audit_cmd, common);
  audit_cmd->add_option("--data", audit_o.data, "TSV to audit")->required()->check(CLI::ExistingFile);
  audit_cmd->add_option("--split", audit_o.split, "train | dev | test | gen");
  audit_cmd->add_option("--show", audit_o.show, "Mismatches to list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }
  if (*seed_opt) train_o.seed = train_seed;

  try {
    if (*derive_cmd) return derive(common, derive_o);
    if (*train_cmd) return train(common, train_o);
    if (*eval_cmd) return eval(common, eval_o);
    if (*analyze_cmd) return analyze(common, analyze_o);
    if (*synth_cmd) return synth(common, synth_o);
    if (*audit_cmd) return audit(common, audit_o);
  } catch (const ccgnca::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

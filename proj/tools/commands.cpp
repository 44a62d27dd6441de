// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#include "commands.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ccgnca/analysis.hpp"
#include "ccgnca/error.hpp"
#include "ccgnca/evaluation.hpp"

namespace ccgnca::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

ccg::TypeTable load_types(const Common& c) {
  return c.type_table.empty() ? ccg::TypeTable::default_table() : ccg::TypeTable::load(c.type_table);
}

Lexicon load_lexicon(const Common& c) { return c.lexicon.empty() ? Lexicon{} : Lexicon::load(c.lexicon); }

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

json rounded(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return json::parse(buf);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write " + p.string());
}

json names(const std::vector<int>& ids, const ccg::TypeTable& types) {
  json out = json::array();
  for (int id : ids) out.push_back(types.at(id).name);
  return out;
}

std::vector<int> ids_of(const json& arr, const ccg::TypeTable& types) {
  std::vector<int> out;
  for (const auto& n : arr) out.push_back(types.id_of(n.get<std::string>()));
  return out;
}

std::string render_derivation(const ccg::Derivation& d, int node, const std::vector<ccg::ContentToken>& toks) {
  const auto& n = d.nodes[static_cast<std::size_t>(node)];
  if (n.left < 0) return n.category.str() + ":" + toks[static_cast<std::size_t>(n.begin)].text;
  return "(" + std::string(ccg::rule_name(n.rule)) + " " + render_derivation(d, n.left, toks) + " " +
         render_derivation(d, n.right, toks) + ")";
}

eval::Metric parse_metric(const std::string& m) {
  if (m == "type") return eval::Metric::type;
  if (m == "edge") return eval::Metric::edge;
  if (m == "initial") return eval::Metric::initial;
  if (m == "final") return eval::Metric::final;
  throw Error("unknown metric '" + m + "'");
}

eval::EvalRecord failed_record(const train::CoverageFailure& f) {
  eval::EvalRecord r;
  r.example_id = f.id;
  r.category = f.category;
  r.failure_note = f.reason;
  return r;
}

json record_json(const eval::EvalRecord& r, int run, const ccg::TypeTable& types) {
  json j;
  j["run"] = run;
  j["id"] = r.example_id;
  j["category"] = r.category;
  j["initial_match"] = r.initial_match;
  j["final_match"] = r.final_match;
  j["type_match"] = r.type_match;
  j["edge_match"] = r.edge_match;
  j["cky_ok"] = r.cky_ok;
  j["predicted_initial"] = names(r.predicted_initial_types, types);
  j["predicted_final"] = names(r.predicted_final_types, types);
  if (r.failure_note) j["note"] = *r.failure_note;
  return j;
}

eval::EvalRecord record_from_json(const json& j, const ccg::TypeTable& types) {
  eval::EvalRecord r;
  r.example_id = j.at("id").get<std::uint64_t>();
  r.category = j.at("category").get<std::string>();
  r.initial_match = j.at("initial_match").get<bool>();
  r.final_match = j.at("final_match").get<bool>();
  r.type_match = j.at("type_match").get<bool>();
  r.edge_match = j.at("edge_match").get<bool>();
  r.cky_ok = j.at("cky_ok").get<bool>();
  r.predicted_initial_types = ids_of(j.at("predicted_initial"), types);
  r.predicted_final_types = ids_of(j.at("predicted_final"), types);
  if (j.contains("note")) r.failure_note = j.at("note").get<std::string>();
  return r;
}

json model_json(const nn::ModelConfig& m) {
  json j;
  j["K"] = m.K;
  j["D"] = m.D;
  j["H"] = m.H;
  j["C"] = m.C;
  j["embed_dim"] = m.embed_dim;
  j["T_max"] = m.T_max;
  j["params"] = m.param_count();
  return j;
}

json train_json(const train::TrainConfig& t) {
  json j;
  j["lr"] = t.lr;
  j["weight_decay"] = t.weight_decay;
  j["temp_start"] = t.temp_start;
  j["temp_end"] = t.temp_end;
  j["temp_anneal_epochs"] = t.temp_anneal_epochs;
  j["T_start"] = t.T_start;
  j["T_max"] = t.T_max;
  j["epochs"] = t.epochs;
  j["batch_size"] = t.batch_size;
  j["w_init"] = t.loss_weights.init;
  j["w_final"] = t.loss_weights.final;
  j["select_best"] = t.select_best;
  return j;
}

std::string edge_text(const lf::Edge& e, const std::vector<std::string>& tokens) {
  auto word = [&](int i) { return i >= 0 && i < static_cast<int>(tokens.size()) ? tokens[static_cast<std::size_t>(i)] : "?"; };
  return word(e.head) + " -" + e.role + "-> " + word(e.dependent);
}

}  // namespace

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return hex64(h);
}

std::pair<nn::ModelConfig, train::TrainConfig> resolve(const ModelOptions& m, int C, int file_embed_dim) {
  nn::ModelConfig mc;
  train::TrainConfig tc;
  mc.C = C;
  if (m.profile == "desk") {
    mc.K = 32;
    mc.D = 32;
    mc.H = 64;
    mc.embed_dim = 64;
    tc.T_max = 8;
    tc.epochs = 40;
    tc.temp_anneal_epochs = 25;
  } else if (m.profile == "full") {
    mc.H = 0;  // from the parameter budget below
  } else {
    throw Error("unknown profile '" + m.profile + "'");
  }
  if (m.K > 0) mc.K = m.K;
  if (m.D > 0) mc.D = m.D;
  if (m.embed_dim > 0) mc.embed_dim = m.embed_dim;
  if (file_embed_dim > 0) {
    if (m.embed_dim > 0 && m.embed_dim != file_embed_dim)
      throw Error("--embed-dim disagrees with the embedding file (" + std::to_string(file_embed_dim) + ")");
    mc.embed_dim = file_embed_dim;
  }
  if (m.H > 0) mc.H = m.H;
  else if (m.profile == "full") mc.H = nn::ModelConfig::hidden_for_budget(mc.embed_dim, mc.K, mc.D, mc.C);
  if (m.T_max > 0) tc.T_max = m.T_max;
  if (m.epochs > 0) tc.epochs = m.epochs;
  if (m.anneal > 0) tc.temp_anneal_epochs = m.anneal;
  if (m.batch_size > 0) tc.batch_size = m.batch_size;
  if (m.lr > 0) tc.lr = m.lr;
  if (m.weight_decay >= 0) tc.weight_decay = m.weight_decay;
  if (m.w_init >= 0) tc.loss_weights.init = m.w_init;
  if (m.w_final >= 0) tc.loss_weights.final = m.w_final;
  tc.select_best = !m.no_select_best;
  mc.T_max = tc.T_max;
  tc.validate();
  return {mc, tc};
}

int derive(const Common& c, const DeriveOptions& o) {
  const auto types = load_types(c);
  const auto lexicon = load_lexicon(c);
  const auto split = data::parse_split(o.split);
  data::LoadReport report;
  const auto examples = data::load_tsv(o.data, split, &report);

  std::ostringstream lines;
  json failures = json::array();
  std::size_t ok = 0;
  for (const auto& ex : examples) {
    try {
      const auto t = ccg::build_trajectory(lf::parse_lf(ex.lf_text), ex.sentence, types, lexicon);
      json j;
      j["id"] = ex.id;
      j["category"] = ex.category;
      json toks = json::array(), pos = json::array();
      for (const auto& tok : t.content_tokens) {
        toks.push_back(tok.text);
        pos.push_back(tok.position);
      }
      j["content"] = toks;
      j["positions"] = pos;
      j["initial"] = names(t.initial_types, types);
      j["final"] = names(t.final_types, types);
      j["derivation"] = render_derivation(t.derivation, t.derivation.root(), t.content_tokens);
      lines << j.dump() << '\n';
      ++ok;
    } catch (const Error& e) {
      failures.push_back(json{{"id", ex.id}, {"category", ex.category}, {"reason", e.what()}});
    }
  }

  json manifest;
  manifest["data"] = o.data;
  manifest["split"] = o.split;
  manifest["rows"] = examples.size();
  manifest["trajectorized"] = ok;
  manifest["type_table_hash"] = hex64(types.hash());
  manifest["per_category"] = report.per_category;
  manifest["warnings"] = report.warnings;
  manifest["failures"] = failures;

  if (!o.out.empty()) write_file(o.out, lines.str());
  const std::string manifest_path = o.manifest.empty() ? (o.out.empty() ? "" : o.out + ".manifest.json") : o.manifest;
  if (!manifest_path.empty()) write_file(manifest_path, manifest.dump(2) + "\n");
  if (!o.funcwords_out.empty()) lexicon.save(o.funcwords_out);

  if (c.format == "json") {
    std::cout << manifest.dump(2) << "\n";
  } else {
    std::cout << "rows " << examples.size() << ", trajectorized " << ok << ", failures " << failures.size() << "\n";
    for (const auto& w : report.warnings) std::cout << "warning: " << w << "\n";
    for (const auto& f : failures)
      std::cout << "  id " << f["id"].get<std::uint64_t>() << " [" << f["category"].get<std::string>()
                << "]: " << f["reason"].get<std::string>() << "\n";
  }
  if (split == data::Split::train && !failures.empty()) {
    std::cerr << "error: " << failures.size() << " training examples failed to trajectorize\n";
    return 1;
  }
  return 0;
}

int train(const Common& c, const TrainOptions& o) {
  const auto types = load_types(c);
  const auto lexicon = load_lexicon(c);

  std::unique_ptr<data::FileEmbeddings> file_store;
  if (o.embeddings.rfind("file:", 0) == 0) {
    file_store = std::make_unique<data::FileEmbeddings>(o.embeddings.substr(5));
  } else if (o.embeddings != "table") {
    throw Error("--embeddings must be 'table' or 'file:PATH'");
  }
  auto [mc, tc] = resolve(o.model, types.size(), file_store ? file_store->dim() : 0);
  tc.jobs = c.jobs;

  std::vector<std::uint64_t> seeds = o.seeds;
  if (seeds.empty()) seeds.push_back(o.seed.value_or(0));
  if (seeds.size() > 1 && fs::exists(o.out) && !fs::is_directory(o.out))
    throw Error("with several seeds --out must be a directory");

  const auto examples = data::load_tsv(o.data, data::Split::train);
  std::vector<data::Example> vocab_examples = examples;
  for (const auto& path : o.vocab_data) {
    const auto extra = data::load_tsv(path, data::Split::gen);
    vocab_examples.insert(vocab_examples.end(), extra.begin(), extra.end());
  }

  json config;
  config["model"] = model_json(mc);
  config["train"] = train_json(tc);
  config["embeddings"] = file_store ? "file" : "table";
  const std::string config_hash = fnv1a_hex(config.dump());

  for (const auto seed : seeds) {
    tc.seed = seed;
    std::optional<data::TableEmbeddings> table;
    if (!file_store) table = data::TableEmbeddings::build(vocab_examples, mc.embed_dim, seed, lexicon);
    auto model = train::make_model(mc, types, seed, std::move(table));
    const data::EmbeddingStore* store = file_store ? static_cast<const data::EmbeddingStore*>(file_store.get())
                                                   : &*model.table;
    const auto prepared = train::prepare(examples, types, lexicon, store);
    if (!prepared.failures.empty()) {
      for (const auto& f : prepared.failures) std::cerr << "  id " << f.id << ": " << f.reason << "\n";
      throw CoverageError(std::to_string(prepared.failures.size()) + " training examples are not usable");
    }

    const fs::path ckpt = seeds.size() > 1 ? fs::path(o.out) / ("seed_" + std::to_string(seed) + ".ckpt")
                                           : fs::path(o.out);
    const fs::path log_path = !o.log.empty() ? (seeds.size() > 1 ? fs::path(o.log) / ("seed_" + std::to_string(seed) + ".jsonl")
                                                                : fs::path(o.log))
                                             : fs::path(ckpt.string() + ".log.jsonl");
    if (log_path.has_parent_path()) fs::create_directories(log_path.parent_path());
    std::ofstream log(log_path);
    json header;
    header["seed"] = seed;
    header["config_hash"] = config_hash;
    header["type_table_hash"] = hex64(types.hash());
    header["examples"] = prepared.examples.size();
    header["config"] = config;
    log << header.dump() << '\n';

    const auto result = train::train(prepared.examples, model, tc, &log);
    if (ckpt.has_parent_path()) fs::create_directories(ckpt.parent_path());
    train::save_checkpoint(ckpt, model);
    const std::string hash = fnv1a_hex(read_file(ckpt));
    if (c.format == "json") {
      json j;
      j["seed"] = seed;
      j["checkpoint"] = ckpt.string();
      j["checkpoint_hash"] = hash;
      j["config_hash"] = config_hash;
      j["selected_epoch"] = result.selected_epoch;
      j["final_loss"] = result.log.empty() ? 0.0 : result.log.back().loss;
      std::cout << j.dump() << "\n";
    } else {
      std::cout << "seed " << seed << ": " << ckpt.string() << " hash " << hash << " config " << config_hash
                << " selected epoch " << result.selected_epoch << "\n";
    }
  }
  return 0;
}

int eval(const Common& c, const EvalOptions& o) {
  const auto types = load_types(c);
  const auto lexicon = load_lexicon(c);
  const auto metric = parse_metric(o.metric);
  if (!o.oracle && o.checkpoints.empty()) throw Error("eval needs --checkpoint or --oracle-types");
  std::unique_ptr<data::FileEmbeddings> file_store;
  if (!o.embeddings.empty()) {
    if (o.embeddings.rfind("file:", 0) != 0) throw Error("eval takes --embeddings file:PATH");
    file_store = std::make_unique<data::FileEmbeddings>(o.embeddings.substr(5));
  }
  std::vector<train::Model> models;
  for (const auto& path : o.checkpoints) models.push_back(train::load_checkpoint(path, &types));
  for (const auto& m : models)
    if (!m.table && !file_store) throw Error("checkpoint trained on file embeddings needs --embeddings file:PATH");

  const auto examples = data::load_tsv(o.data, data::Split::gen);
  std::vector<std::vector<eval::EvalRecord>> runs;
  auto run_one = [&](const train::Model* model) {
    const data::EmbeddingStore* store = nullptr;
    if (model) store = model->table ? static_cast<const data::EmbeddingStore*>(&*model->table) : file_store.get();
    const auto prepared = train::prepare(examples, types, lexicon, store);
    auto records = eval::evaluate(model, prepared.examples, types, lexicon, model == nullptr, c.jobs);
    for (const auto& f : prepared.failures) records.push_back(failed_record(f));
    runs.push_back(std::move(records));
  };
  if (o.oracle) run_one(nullptr);
  else
    for (const auto& m : models) run_one(&m);

  if (!o.records_out.empty()) {
    std::ostringstream out;
    for (std::size_t r = 0; r < runs.size(); ++r)
      for (const auto& rec : runs[r]) out << record_json(rec, static_cast<int>(r), types).dump() << '\n';
    write_file(o.records_out, out.str());
  }

  std::vector<eval::Metric> metrics{metric};
  if (o.oracle && metric != eval::Metric::edge) metrics.push_back(eval::Metric::edge);
  if (c.format == "json") {
    json j = json::array();
    for (auto m : metrics) j.push_back(json::parse(eval::render_json(eval::category_report(runs, m))));
    std::cout << j.dump(2) << "\n";
  } else {
    for (auto m : metrics) std::cout << eval::render_text(eval::category_report(runs, m)) << "\n";
    if (o.oracle) {
      std::size_t shown = 0;
      for (const auto& r : runs.front()) {
        if (r.edge_match || shown >= 20) continue;
        ++shown;
        std::cout << "  mismatch id " << r.example_id << " [" << r.category
                  << "]: " << r.failure_note.value_or("edge mismatch") << "\n";
      }
    }
  }
  return 0;
}

int analyze(const Common& c, const AnalyzeOptions& o) {
  const auto types = load_types(c);
  const auto lexicon = load_lexicon(c);
  const auto metric = parse_metric(o.metric);
  const auto gen = data::load_tsv(o.data, data::Split::gen);
  const auto train_set = data::load_tsv(o.train, data::Split::train);

  analysis::TrainCoverage coverage;
  std::size_t train_failures = 0;
  for (const auto& ex : train_set) {
    try {
      coverage.add(ccg::build_trajectory(lf::parse_lf(ex.lf_text), ex.sentence, types, lexicon), types);
    } catch (const Error&) {
      ++train_failures;
    }
  }

  struct Info {
    std::string key;
    std::vector<std::vector<int>> novel3;
  };
  std::map<std::uint64_t, Info> info;
  for (const auto& ex : gen) {
    Info in;
    try {
      const auto form = lf::parse_lf(ex.lf_text);
      const auto t = ccg::build_trajectory(form, ex.sentence, types, lexicon);
      std::string mech;
      for (auto m : analysis::classify_mechanism(t, coverage, types))
        mech += (mech.empty() ? "" : "+") + std::string(analysis::to_string(m));
      in.key = analysis::classify_subpattern(form, t, types).key() + " mech=" + mech;
      in.novel3 = analysis::ngram_coverage(coverage, t.initial_types, 3);
    } catch (const Error&) {
      in.key = "untrajectorized";
    }
    info[ex.id] = std::move(in);
  }

  std::map<std::string, std::pair<std::vector<eval::EvalRecord>, std::vector<std::string>>> by_category;
  std::istringstream lines(read_file(o.records));
  std::size_t line_no = 0;
  for (std::string line; std::getline(lines, line);) {
    ++line_no;
    if (line.empty()) continue;
    eval::EvalRecord r;
    try {
      r = record_from_json(json::parse(line), types);
    } catch (const std::exception& e) {
      throw FormatError(line_no, std::string("bad record: ") + e.what());
    }
    if (!o.category.empty() && r.category != o.category) continue;
    const auto it = info.find(r.example_id);
    if (it == info.end()) throw Error("record id " + std::to_string(r.example_id) + " not in --data");
    auto& [recs, keys] = by_category[r.category];
    recs.push_back(std::move(r));
    keys.push_back(it->second.key);
  }
  if (by_category.empty()) throw Error("no records matched");

  // Novel trigrams per category, counted once per example.
  std::map<std::string, std::map<std::vector<int>, std::size_t>> trigrams;
  std::map<std::string, std::size_t> with_novel, sizes;
  for (const auto& ex : gen) {
    if (!by_category.contains(ex.category)) continue;
    ++sizes[ex.category];
    const auto& n3 = info[ex.id].novel3;
    if (!n3.empty()) ++with_novel[ex.category];
    for (const auto& g : n3) ++trigrams[ex.category][g];
  }
  auto gram_text = [&](const std::vector<int>& g) {
    std::string s;
    for (int id : g) s += (s.empty() ? "" : " ") + types.at(id).name;
    return s;
  };

  json out = json::array();
  for (const auto& [cat, rk] : by_category) {
    const auto d = analysis::decompose_category(cat, rk.first, rk.second, metric);
    if (c.format == "json") {
      json j = json::parse(analysis::render_json(d));
      json grams = json::array();
      for (const auto& [g, n] : trigrams[cat]) grams.push_back(json{{"trigram", gram_text(g)}, {"examples", n}});
      j["examples_with_novel_trigram"] = with_novel[cat];
      j["novel_trigrams"] = grams;
      out.push_back(j);
    } else {
      std::cout << analysis::render_text(d);
      std::cout << "  novel type trigrams: " << with_novel[cat] << "/" << sizes[cat] << " examples\n";
      for (const auto& [g, n] : trigrams[cat]) std::cout << "    " << gram_text(g) << "  x" << n << "\n";
      std::cout << "\n";
    }
  }
  if (c.format == "json") std::cout << out.dump(2) << "\n";
  if (train_failures) std::cerr << "warning: " << train_failures << " training rows did not trajectorize\n";
  return 0;
}

int synth(const Common& c, const SynthOptions& o) {
  const auto config = o.config.empty() ? data::SynthConfig{} : data::SynthConfig::from_json(read_file(o.config));
  const auto corpus = data::gen_synthetic(config, o.seed);
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  data::write_tsv(dir / "train.tsv", corpus.train);
  data::write_tsv(dir / "gen.tsv", corpus.gen);
  write_file(dir / "config.json", config.to_json() + "\n");
  if (c.format == "json") {
    std::cout << json{{"train", corpus.train.size()}, {"gen", corpus.gen.size()}, {"seed", o.seed}}.dump() << "\n";
  } else {
    std::cout << "train " << corpus.train.size() << " rows, gen " << corpus.gen.size() << " rows -> "
              << dir.string() << "\n";
  }
  return 0;
}

int audit(const Common& c, const AuditOptions& o) {
  const auto types = load_types(c);
  const auto lexicon = load_lexicon(c);
  const auto examples = data::load_tsv(o.data, data::parse_split(o.split));

  std::map<std::string, std::size_t> failure_kinds;
  std::map<std::string, std::pair<std::size_t, std::size_t>> per_category;  // agree, n
  std::size_t trajectorized = 0, agree = 0, direction = 0, soundness = 0;
  std::vector<std::string> shown;
  for (const auto& ex : examples) {
    ccg::Trajectory t;
    try {
      t = ccg::build_trajectory(lf::parse_lf(ex.lf_text), ex.sentence, types, lexicon);
    } catch (const AmbiguousParse&) {
      ++failure_kinds["AmbiguousParse"];
      continue;
    } catch (const NoParse&) {
      ++failure_kinds["NoParse"];
      continue;
    } catch (const DerivationGap&) {
      ++failure_kinds["DerivationGap"];
      continue;
    } catch (const Error&) {
      ++failure_kinds["other"];
      continue;
    }
    ++trajectorized;
    for (const auto& n : t.derivation.nodes) {
      if (n.left < 0) continue;
      const auto& l = t.derivation.nodes[static_cast<std::size_t>(n.left)].category;
      const auto& r = t.derivation.nodes[static_cast<std::size_t>(n.right)].category;
      if ((n.rule == ccg::Rule::fwd_app && l.kind() != ccg::Category::Kind::forward) ||
          (n.rule == ccg::Rule::bwd_app && r.kind() != ccg::Category::Kind::backward))
        ++direction;
      const auto re = ccg::apply_rule(n.rule, l, r);
      if (!re || !(*re == n.category)) ++soundness;
    }
    auto& pc = per_category[ex.category];
    ++pc.second;
    lf::EdgeSet got, want;
    bool ok = false;
    try {
      want = lf::lf_to_edges(lf::parse_lf(ex.lf_text), ex.sentence);
      got = ccg::extract_edges(t.derivation, t.content_tokens, types, lexicon);
      ok = got == want;
    } catch (const Error&) {
    }
    if (ok) {
      ++agree;
      ++pc.first;
    } else if (static_cast<int>(shown.size()) < o.show) {
      std::string s = "id " + std::to_string(ex.id) + " [" + ex.category + "]:";
      for (const auto& w : ex.sentence) s += " " + w;
      for (const auto& e : want.edges)
        if (!std::binary_search(got.edges.begin(), got.edges.end(), e)) s += "\n      gold only: " + edge_text(e, ex.sentence);
      for (const auto& e : got.edges)
        if (!std::binary_search(want.edges.begin(), want.edges.end(), e)) s += "\n      cky only:  " + edge_text(e, ex.sentence);
      shown.push_back(s);
    }
  }

  const double pct = trajectorized ? 100.0 * static_cast<double>(agree) / static_cast<double>(trajectorized) : 0.0;
  if (c.format == "json") {
    json j;
    j["rows"] = examples.size();
    j["trajectorized"] = trajectorized;
    j["failures"] = failure_kinds;
    j["edge_agreement"] = agree;
    j["edge_agreement_pct"] = rounded(pct);
    j["direction_violations"] = direction;
    j["soundness_violations"] = soundness;
    json cats;
    for (const auto& [cat, p] : per_category) cats[cat] = json{{"agree", p.first}, {"n", p.second}};
    j["per_category"] = cats;
    j["mismatches"] = shown;
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("rows %zu, trajectorized %zu\n", examples.size(), trajectorized);
    for (const auto& [k, n] : failure_kinds) std::printf("  %s: %zu\n", k.c_str(), n);
    std::printf("type->edge agreement %zu/%zu (%.2f%%)\n", agree, trajectorized, pct);
    std::printf("direction violations %zu, soundness violations %zu\n", direction, soundness);
    for (const auto& [cat, p] : per_category)
      if (p.first != p.second) std::printf("  %-28s %zu/%zu\n", cat.c_str(), p.first, p.second);
    for (const auto& s : shown) std::printf("  %s\n", s.c_str());
  }
  return 0;
}

}  // namespace ccgnca::cli

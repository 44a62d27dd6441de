// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#include "ccgnca/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ccgnca/error.hpp"

namespace ccgnca {

bool Lexicon::is_function_word(std::string_view lower) const {
  return std::find(function_words.begin(), function_words.end(), lower) != function_words.end();
}

bool Lexicon::is_article(std::string_view lower) const {
  return std::find(articles.begin(), articles.end(), lower) != articles.end();
}

std::string Lexicon::preposition_role(std::string_view lower) const {
  auto it = argument_prepositions.find(std::string(lower));
  return it == argument_prepositions.end() ? std::string() : it->second;
}

std::string Lexicon::to_json() const {
  nlohmann::json j;
  j["function_words"] = function_words;
  j["strip_complementizer_that"] = strip_complementizer_that;
  j["articles"] = articles;
  j["argument_prepositions"] = argument_prepositions;
  j["infinitive_marker"] = infinitive_marker;
  j["passive_auxiliary"] = passive_auxiliary;
  return j.dump(2);
}

Lexicon Lexicon::from_json(std::string_view text) {
  Lexicon lex;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("bad lexicon json: ") + e.what());
  }
  if (j.contains("function_words")) lex.function_words = j["function_words"].get<std::vector<std::string>>();
  if (j.contains("strip_complementizer_that")) lex.strip_complementizer_that = j["strip_complementizer_that"];
  if (j.contains("articles")) lex.articles = j["articles"].get<std::vector<std::string>>();
  if (j.contains("argument_prepositions")) {
    lex.argument_prepositions = j["argument_prepositions"].get<std::map<std::string, std::string>>();
  }
  if (j.contains("infinitive_marker")) lex.infinitive_marker = j["infinitive_marker"];
  if (j.contains("passive_auxiliary")) lex.passive_auxiliary = j["passive_auxiliary"];
  return lex;
}

void Lexicon::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json() << "\n";
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace ccgnca

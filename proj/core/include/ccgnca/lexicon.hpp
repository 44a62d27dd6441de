// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ccgnca {

/// Closed-class word knowledge shared by stripping, typing and edge
/// extraction. Also exported as a JSON sidecar so external embedding
/// exporters select the same content positions.
struct Lexicon {
  std::vector<std::string> function_words{"a", "an", "the", "was", "did", ".", "?"};
  /// "that" is stripped unless the token two to its left is an article
  /// ("the girl that ..."), which marks a relative pronoun.
  bool strip_complementizer_that = true;
  std::vector<std::string> articles{"a", "an", "the"};
  /// Prepositions that mark verb arguments, with the role they carry.
  std::map<std::string, std::string> argument_prepositions{{"by", "agent"}, {"to", "recipient"}};
  std::string infinitive_marker = "to";
  std::string passive_auxiliary = "was";

  static Lexicon defaults() { return {}; }

  bool is_function_word(std::string_view lower) const;
  bool is_article(std::string_view lower) const;
  /// Role carried by an argument preposition, or empty.
  std::string preposition_role(std::string_view lower) const;

  std::string to_json() const;
  static Lexicon from_json(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static Lexicon load(const std::filesystem::path& path);
};

}  // namespace ccgnca

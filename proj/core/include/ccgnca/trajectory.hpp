// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#pragma once

#include <span>
#include <string>
#include <vector>

#include "ccgnca/ccg_types.hpp"
#include "ccgnca/derivation.hpp"
#include "ccgnca/lexicon.hpp"
#include "ccgnca/lf.hpp"

namespace ccgnca::ccg {

struct StripResult {
  std::vector<ContentToken> content;
  std::vector<int> alignment;  // content index -> original position
};

StripResult strip_function_words(std::span<const std::string> tokens, const Lexicon& lexicon = {});

/// One lexical type id per content token, read off the gold logical form.
/// Throws DerivationGap when no rule applies.
std::vector<int> derive_types(const lf::LogicalForm& lf, std::span<const std::string> tokens,
                              std::span<const ContentToken> content, const TypeTable& table,
                              const Lexicon& lexicon = {});

/// Per-example supervision: initial types, the head-surviving final types
/// and the derivation connecting them.
struct Trajectory {
  std::vector<ContentToken> content_tokens;
  std::vector<int> initial_types;
  std::vector<int> final_types;
  Derivation derivation;
};

/// Root type at the head leaf, EMPTY elsewhere.
std::vector<int> final_types(const Derivation& d, const TypeTable& table);

Trajectory build_trajectory(const lf::LogicalForm& lf, std::span<const std::string> tokens, const TypeTable& table,
                            const Lexicon& lexicon = {});

}  // namespace ccgnca::ccg

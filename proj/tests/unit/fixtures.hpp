// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
//
// Hand-checked sentences with gold logical forms and the lexical types a
// linguist would assign after function-word stripping.
#pragma once

#include <sstream>
#include <string>
#include <vector>

namespace fixtures {

struct GoldCase {
  const char* sentence;
  const char* lf;
  const char* types;  // space separated type names, one per content token
};

inline const std::vector<GoldCase>& gold_cases() {
  static const std::vector<GoldCase> cases = {
      {"A cake was burned .", "cake ( x _ 1 ) AND burn . theme ( x _ 3 , x _ 1 )", "NP PASS"},
      {"A cat slept .", "cat ( x _ 1 ) AND sleep . agent ( x _ 2 , x _ 1 )", "NP IV"},
      {"The ball rolled .", "* ball ( x _ 1 ) ; roll . theme ( x _ 2 , x _ 1 )", "NP UNACC"},
      {"Who chased the cat ?",
       "* cat ( x _ 3 ) ; chase . agent ( x _ 1 , ? ) AND chase . theme ( x _ 1 , x _ 3 )", "WH TV NP"},
      {"What did Emma chase ?", "chase . agent ( x _ 3 , Emma ) AND chase . theme ( x _ 3 , ? )", "WH NP IV"},
      {"Who did a girl give the scarf to ?",
       "* scarf ( x _ 6 ) ; girl ( x _ 3 ) AND give . agent ( x _ 4 , x _ 3 ) AND give . theme ( x _ 4 , x _ 6 ) "
       "AND give . recipient ( x _ 4 , ? )",
       "WH NP DTV_TO NP PP"},
      {"What was given to a mouse by a student ?",
       "mouse ( x _ 5 ) AND student ( x _ 8 ) AND give . theme ( x _ 2 , ? ) AND give . recipient ( x _ 2 , x _ 5 ) "
       "AND give . agent ( x _ 2 , x _ 8 )",
       "WH PASS_PP2 P_ARG NP P_ARG NP"},
      {"Emma cleaned a cake beside a car .",
       "cake ( x _ 3 ) AND car ( x _ 6 ) AND clean . agent ( x _ 1 , Emma ) AND clean . theme ( x _ 1 , x _ 3 ) "
       "AND cake . nmod . beside ( x _ 3 , x _ 6 )",
       "NP TV NP PREP NP"},
      {"Who cleaned a cake beside a car ?",
       "cake ( x _ 3 ) AND car ( x _ 6 ) AND clean . agent ( x _ 1 , ? ) AND clean . theme ( x _ 1 , x _ 3 ) "
       "AND cake . nmod . beside ( x _ 3 , x _ 6 )",
       "WH TV NP PREP NP"},
      {"A cake that Liam found was investigated by the cat .",
       "* cat ( x _ 9 ) ; cake ( x _ 1 ) AND find . agent ( x _ 4 , Liam ) AND find . theme ( x _ 4 , x _ 1 ) "
       "AND investigate . theme ( x _ 6 , x _ 1 ) AND investigate . agent ( x _ 6 , x _ 9 )",
       "NP RC_THAT NP TV_GAP PASS_PP P_ARG NP"},
      {"Emma said that a cat slept .",
       "cat ( x _ 4 ) AND say . agent ( x _ 1 , Emma ) AND say . ccomp ( x _ 1 , x _ 5 ) "
       "AND sleep . agent ( x _ 5 , x _ 4 )",
       "NP CCOMP NP IV"},
      {"Emma wanted to sleep .",
       "want . agent ( x _ 1 , Emma ) AND want . xcomp ( x _ 1 , x _ 3 ) AND sleep . agent ( x _ 3 , Emma )",
       "NP XCOMP TO_INF IV"},
      {"Who did Emma say that Liam saw ?",
       "say . agent ( x _ 3 , Emma ) AND say . ccomp ( x _ 3 , x _ 6 ) AND see . agent ( x _ 6 , Liam ) "
       "AND see . theme ( x _ 6 , ? )",
       "WH NP CCOMP NP IV"},
      {"Emma gave Liam a cake .",
       "cake ( x _ 4 ) AND give . agent ( x _ 1 , Emma ) AND give . recipient ( x _ 1 , Liam ) "
       "AND give . theme ( x _ 1 , x _ 4 )",
       "NP DTV NP NP"},
      {"Emma gave a cake to Liam .",
       "cake ( x _ 3 ) AND give . agent ( x _ 1 , Emma ) AND give . theme ( x _ 1 , x _ 3 ) "
       "AND give . recipient ( x _ 1 , Liam )",
       "NP DTV_TO NP P_ARG NP"},
      {"Emma was given a cake .",
       "cake ( x _ 4 ) AND give . recipient ( x _ 2 , Emma ) AND give . theme ( x _ 2 , x _ 4 )", "NP PASS_DO NP"},
      {"Emma was given a cake by Liam .",
       "cake ( x _ 4 ) AND give . recipient ( x _ 2 , Emma ) AND give . theme ( x _ 2 , x _ 4 ) "
       "AND give . agent ( x _ 2 , Liam )",
       "NP PASS_DO_BY NP P_ARG NP"},
      {"A cake was burned by Emma .", "cake ( x _ 1 ) AND burn . theme ( x _ 3 , x _ 1 ) AND burn . agent ( x _ 3 , Emma )",
       "NP PASS_PP P_ARG NP"},
      {"What did Emma give the girl ?",
       "* girl ( x _ 5 ) ; give . agent ( x _ 3 , Emma ) AND give . recipient ( x _ 3 , x _ 5 ) "
       "AND give . theme ( x _ 3 , ? )",
       "WH NP TV NP"},
      {"Who did Emma give the cake ?",
       "* cake ( x _ 5 ) ; give . agent ( x _ 3 , Emma ) AND give . theme ( x _ 3 , x _ 5 ) "
       "AND give . recipient ( x _ 3 , ? )",
       "WH NP TV NP"},
      {"A cat on a table slept .",
       "cat ( x _ 1 ) AND table ( x _ 4 ) AND cat . nmod . on ( x _ 1 , x _ 4 ) AND sleep . agent ( x _ 5 , x _ 1 )",
       "NP PREP NP IV"},
      {"Emma saw a cat on a table in a house beside a car .",
       "cat ( x _ 3 ) AND table ( x _ 6 ) AND house ( x _ 9 ) AND car ( x _ 12 ) AND see . agent ( x _ 1 , Emma ) "
       "AND see . theme ( x _ 1 , x _ 3 ) AND cat . nmod . on ( x _ 3 , x _ 6 ) "
       "AND table . nmod . in ( x _ 6 , x _ 9 ) AND house . nmod . beside ( x _ 9 , x _ 12 )",
       "NP TV NP PREP NP PREP NP PREP NP"},
      {"The girl that the duck broke hoped that a cake was burned .",
       "* girl ( x _ 1 ) ; * duck ( x _ 4 ) ; cake ( x _ 9 ) AND break . agent ( x _ 5 , x _ 4 ) "
       "AND break . theme ( x _ 5 , x _ 1 ) AND hope . agent ( x _ 6 , x _ 1 ) AND hope . ccomp ( x _ 6 , x _ 11 ) "
       "AND burn . theme ( x _ 11 , x _ 9 )",
       "NP RC_THAT NP TV_GAP CCOMP NP PASS"},
      {"Emma saw the girl that Liam gave the cake to .",
       "* girl ( x _ 3 ) ; * cake ( x _ 8 ) ; see . agent ( x _ 1 , Emma ) AND see . theme ( x _ 1 , x _ 3 ) "
       "AND give . agent ( x _ 6 , Liam ) AND give . theme ( x _ 6 , x _ 8 ) AND give . recipient ( x _ 6 , x _ 3 )",
       "NP TV NP RC_THAT NP DTV_TO NP PP"},
      {"Emma saw the girl that helped Liam .",
       "* girl ( x _ 3 ) ; see . agent ( x _ 1 , Emma ) AND see . theme ( x _ 1 , x _ 3 ) "
       "AND help . agent ( x _ 5 , x _ 3 ) AND help . theme ( x _ 5 , Liam )",
       "NP TV NP RC_THAT TV NP"},
      {"Emma said that Liam wanted to sleep .",
       "say . agent ( x _ 1 , Emma ) AND say . ccomp ( x _ 1 , x _ 4 ) AND want . agent ( x _ 4 , Liam ) "
       "AND want . xcomp ( x _ 4 , x _ 6 ) AND sleep . agent ( x _ 6 , Liam )",
       "NP CCOMP NP XCOMP TO_INF IV"},
  };
  return cases;
}

/// Relative clause whose gap is a theme while the overt object is the
/// recipient: both roles share the type (S\NP)/NP and extraction cannot
/// tell them apart.
inline const GoldCase& ambiguous_case() {
  static const GoldCase c = {
      "Emma saw the cake that Liam gave the girl .",
      "* cake ( x _ 3 ) ; * girl ( x _ 8 ) ; see . agent ( x _ 1 , Emma ) AND see . theme ( x _ 1 , x _ 3 ) "
      "AND give . agent ( x _ 6 , Liam ) AND give . theme ( x _ 6 , x _ 3 ) AND give . recipient ( x _ 6 , x _ 8 )",
      "NP TV NP RC_THAT NP TV NP"};
  return c;
}

inline std::vector<std::string> words(const char* s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

}  // namespace fixtures

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ccgnca Authors
#include "ccgnca/ccg_types.hpp"
#include "ccgnca/error.hpp"
#include "doctest.h"

using namespace ccgnca;
using ccg::Category;
using ccg::TypeTable;

TEST_CASE("default table: 24 linguistic types plus EMPTY") {
  const auto t = TypeTable::default_table();
  CHECK(t.size() == 25);
  CHECK(t.base_count() == 20);
  CHECK(t.extension_count() == 4);
  CHECK(t.at(t.empty_id()).empty);
  for (const char* ext : {"RC_THAT", "TV_GAP", "S_GAP", "WH"}) {
    CHECK(t.at(t.id_of(ext)).extension);
    CHECK(t.at(t.id_of(ext)).structure() == ccg::StructureKind::special);
  }
  CHECK(t.at(t.id_of("TV")).structure() == ccg::StructureKind::forward);
  CHECK(t.at(t.id_of("IV")).structure() == ccg::StructureKind::backward);
  CHECK(t.at(t.id_of("NP")).structure() == ccg::StructureKind::atomic);
}

TEST_CASE("category parsing and canonical text") {
  const auto c = Category::parse("((S\\NP)/PP)/NP");
  CHECK(c.kind() == Category::Kind::forward);
  CHECK(c.argument().is_atom("NP"));
  CHECK(c.result().str() == "(S\\NP)/PP");
  CHECK(c.str() == "((S\\NP)/PP)/NP");
  // Left associativity.
  CHECK(Category::parse("S\\NP/NP") == Category::parse("(S\\NP)/NP"));
  CHECK(Category::parse(" ( S\\NP ) ") == Category::parse("S\\NP"));
  CHECK_THROWS_AS(Category::parse("(S\\NP"), Error);
  CHECK_THROWS_AS(Category::parse(""), Error);
}

TEST_CASE("table text round-trips with a stable hash") {
  const auto t = TypeTable::default_table();
  const auto again = TypeTable::parse(t.render());
  CHECK(again.render() == t.render());
  CHECK(again.hash() == t.hash());
  for (const auto& type : t.types()) {
    CHECK(again.at(type.id).roles.render() == type.roles.render());
  }
}

TEST_CASE("table rows without roles and malformed rows") {
  const auto t = TypeTable::parse("# comment\n0\tNP\tNP\n1\tTV\t(S\\NP)/NP\n2\tEMPTY\t\xE2\x88\x85\n");
  CHECK(t.size() == 3);
  CHECK(t.empty_id() == 2);
  CHECK(t.class_of(Category::parse("(S\\NP)/NP")) == 1);
  CHECK_FALSE(t.class_of(Category::parse("S")).has_value());

  try {
    TypeTable::parse("0\tNP\tNP\n5\tS\tS\n");
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(TypeTable::parse("0\tNP\n"), FormatError);
  CHECK_THROWS_AS(TypeTable::parse("0\tNP\tNP\n"), FormatError);  // no EMPTY
}

TEST_CASE("role frames") {
  const auto f = ccg::RoleFrame::parse("subj=agent;fwd=theme,pp");
  CHECK(f.subject == "agent");
  CHECK(f.forward == std::vector<std::string>{"theme", "pp"});
  CHECK(f.render() == "subj=agent;fwd=theme,pp");
  CHECK(ccg::RoleFrame::parse("transparent").transparent);
  CHECK_THROWS_AS(ccg::RoleFrame::parse("nonsense"), Error);
}

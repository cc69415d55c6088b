// SPDX-License-Identifier: Apache-2.0
#include <map>

#include "doctest.h"
#include "fixtures.hpp"
#include "nail/cond/cond.hpp"

using namespace nail;
using namespace nail::cond;

namespace {

const nir::ModuleDef& rf_module() {
  static nir::Circuit c = fixtures::parse_or_throw(fixtures::kRegFile);
  return *c.find_module("rf");
}

ParsedCondition parse_ok(const std::string& text) {
  auto res = parse_condition(text, rf_module());
  REQUIRE_MESSAGE(res.ok(), res.error.str());
  return *res.parsed;
}

std::string parse_err(const std::string& text) {
  auto res = parse_condition(text, rf_module());
  REQUIRE_FALSE(res.ok());
  return res.error.message;
}

}  // namespace

TEST_CASE("scan fields and signals are collected in first-occurrence order") {
  auto p = parse_ok("$sf(targetAddr, 5) == waddr && wen && $sf(armed, 1)");
  REQUIRE(p.fields.size() == 2);
  CHECK(p.fields[0].name == "targetAddr");
  CHECK(p.fields[0].width == 5);
  CHECK(p.fields[1].name == "armed");
  CHECK(p.fields[1].width == 1);
  REQUIRE(p.signals.size() == 2);
  CHECK(p.signals[0].path == "waddr");
  CHECK(p.signals[0].width == 5);
  CHECK(p.signals[1].path == "wen");

  // Repeated use does not re-declare.
  auto q = parse_ok("$sf(a, 5) == waddr || $sf(a, 5) == 3");
  CHECK(q.fields.size() == 1);
}

TEST_CASE("operator precedence: not over and over or") {
  auto p = parse_ok("wen || !wen && wen");
  REQUIRE(p.expr->kind == CondExpr::Kind::Bool);
  CHECK(p.expr->bop == CondExpr::BoolOp::Or);
  // Right arm must be the and.
  REQUIRE(p.expr->args[1]->kind == CondExpr::Kind::Bool);
  CHECK(p.expr->args[1]->bop == CondExpr::BoolOp::And);

  auto q = parse_ok("(wen || !wen) && wen");
  CHECK(q.expr->bop == CondExpr::BoolOp::And);
}

TEST_CASE("literal widths are inferred from the compared operand") {
  auto p = parse_ok("waddr == 15");
  REQUIRE(p.expr->kind == CondExpr::Kind::Compare);
  CHECK(p.expr->args[1]->width == 5);

  CHECK(parse_err("3 == 4").find("literal") != std::string::npos);
  // 40 does not fit 5 bits.
  CHECK(parse_err("waddr == 40").find("fit") != std::string::npos);
}

TEST_CASE("comparisons require equal widths") {
  CHECK(parse_err("waddr == wdata").find("width") != std::string::npos);
  auto p = parse_ok("wdata == wdata");
  CHECK(p.expr->width == 1);
}

TEST_CASE("boolean positions require width one") {
  CHECK(parse_err("waddr && wen").find("width") != std::string::npos);
  CHECK(parse_err("!waddr").find("width") != std::string::npos);
  auto p = parse_ok("!wen");
  CHECK(p.expr->bop == CondExpr::BoolOp::Not);
}

TEST_CASE("scan field redeclaration must match widths") {
  CHECK(parse_err("$sf(t, 5) == waddr && $sf(t, 4) == raddr").find("width") !=
        std::string::npos);
}

TEST_CASE("unknown signals are reported") {
  CHECK(parse_err("ghost == 1").find("ghost") != std::string::npos);
}

TEST_CASE("syntax errors are reported with position") {
  auto res = parse_condition("wen &&", rf_module());
  REQUIRE_FALSE(res.ok());
  CHECK(res.error.code == "E_SYNTAX");
  CHECK(res.error.col > 0);
}

TEST_CASE("multi-scope resolution records the winning level") {
  // Instrumenting a child module: its own ports are level 0, the parent's
  // signals level 1.
  std::string text = R"(
circuit top:
module leaf:
  input x: UInt<4>
  output y: UInt<4>
  y <= x
module top:
  input sel: UInt<1>
  output o: UInt<4>
  wire note: UInt<4>
  inst u of leaf
  u.x <= note
  note <= UInt<4>(7)
  o <= u.y
)";
  auto c = fixtures::parse_or_throw(text);
  const nir::ModuleDef* scopes[] = {c.find_module("leaf"), c.find_module("top")};
  auto res = parse_condition_scoped("x == 2 && sel && note == 5", c, scopes);
  REQUIRE_MESSAGE(res.ok(), res.error.str());
  REQUIRE(res.parsed->signals.size() == 3);
  CHECK(res.parsed->signals[0].path == "x");
  CHECK(res.parsed->signals[0].scopeLevel == 0);
  CHECK(res.parsed->signals[1].path == "sel");
  CHECK(res.parsed->signals[1].scopeLevel == 1);
  CHECK(res.parsed->signals[2].scopeLevel == 1);

  // Instance ports resolve through the circuit.
  auto r2 = parse_condition_scoped("u.y == 3", c, std::span(scopes + 1, 1));
  REQUIRE_MESSAGE(r2.ok(), r2.error.str());
  CHECK(r2.parsed->signals[0].width == 4);
}

TEST_CASE("evaluation follows the fault-matching semantics") {
  auto p = parse_ok("$sf(targetAddr, 5) == waddr && wen");
  std::map<std::string, Value> fields = {{"targetAddr", 15}};

  CHECK(eval_condition(p.expr, {{"waddr", 15}, {"wen", 1}}, fields) == 1);
  CHECK(eval_condition(p.expr, {{"waddr", 15}, {"wen", 0}}, fields) == 0);
  CHECK(eval_condition(p.expr, {{"waddr", 14}, {"wen", 1}}, fields) == 0);

  auto q = parse_ok("!(waddr == 0) || wen");
  CHECK(eval_condition(q.expr, {{"waddr", 0}, {"wen", 0}}, {}) == 0);
  CHECK(eval_condition(q.expr, {{"waddr", 9}, {"wen", 0}}, {}) == 1);

  auto cmp = parse_ok("waddr < 4 || waddr > 30");
  CHECK(eval_condition(cmp.expr, {{"waddr", 3}}, {}) == 1);
  CHECK(eval_condition(cmp.expr, {{"waddr", 4}}, {}) == 0);
  CHECK(eval_condition(cmp.expr, {{"waddr", 31}}, {}) == 1);

  CHECK_THROWS_AS(eval_condition(p.expr, {{"waddr", 15}}, fields), Error);
}

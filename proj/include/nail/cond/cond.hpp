// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nail/nir/ast.hpp"

// Trigger-condition expressions: boolean combinations of comparisons between
// design signals, configuration scan fields introduced inline via
// $sf(name, width), and literals. Example:
//   ($sf(targetAddr, 5) == rf_waddr) && rf_wen
namespace nail::cond {

struct CondExpr;
using CondPtr = std::shared_ptr<const CondExpr>;

struct CondExpr {
  enum class Kind { ScanField, Signal, Literal, Compare, Bool };
  enum class Cmp { Eq, Ne, Lt, Gt };
  enum class BoolOp { And, Or, Not };

  Kind kind = Kind::Literal;
  unsigned width = 1;
  std::string name;        // ScanField name or Signal path
  Value value = 0;         // Literal
  Cmp cmp = Cmp::Eq;
  BoolOp bop = BoolOp::And;
  std::vector<CondPtr> args;
};

struct ScanFieldDecl {
  std::string name;
  unsigned width = 1;
};

struct SignalUse {
  std::string path;
  unsigned width = 1;
  int scopeLevel = 0;  // 0 = innermost scope, 1 = its parent, ...
};

struct ParsedCondition {
  CondPtr expr;
  // Scan fields in first-occurrence order; this order fixes the layout of
  // the conditioner's section of the scan chain.
  std::vector<ScanFieldDecl> fields;
  // Distinct referenced signals in first-occurrence order.
  std::vector<SignalUse> signals;
};

struct CondParseResult {
  std::optional<ParsedCondition> parsed;
  Diagnostic error;
  bool ok() const { return parsed.has_value(); }
};

// Parses a condition against one module scope. Signal paths resolve to
// ports, wires, registers, or instance ports of `scope`.
CondParseResult parse_condition(const std::string& text,
                                const nir::ModuleDef& scope);

// Same, with fallback scopes: a path unresolved in scopes[0] is tried in
// scopes[1] and so on; the winning scope index lands in SignalUse.
CondParseResult parse_condition_scoped(
    const std::string& text, const nir::Circuit& circuit,
    std::span<const nir::ModuleDef* const> scopes);

// Evaluates to 0 or 1. Both maps must cover every referenced name; values
// must fit the respective widths.
Value eval_condition(const CondPtr& expr,
                     const std::map<std::string, Value>& signals,
                     const std::map<std::string, Value>& fields);

}  // namespace nail::cond

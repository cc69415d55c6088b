// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "nail/nir/ast.hpp"

// Name resolution and width computation shared by the parser (fill mode:
// widths are written into the tree) and the validator (check mode: stored
// widths are verified against recomputed ones).
namespace nail::nir::detail {

struct SymInfo {
  enum class Kind { PortIn, PortOut, Wire, Reg, Mem, Inst };
  Kind kind = Kind::Wire;
  unsigned width = 0;
  std::uint64_t depth = 0;
  const ModuleDef* instModule = nullptr;  // Inst
};

struct ModuleScope {
  const ModuleDef* mod = nullptr;
  std::map<std::string, SymInfo> syms;
};

// Builds the symbol table for one module; duplicate names are reported.
ModuleScope build_scope(const Circuit& c, const ModuleDef& m,
                        std::vector<Diagnostic>& diags);

// Resolves every statement of the circuit. In fill mode, Connect statements
// whose target is a register become RegNext and expression widths are
// assigned; otherwise widths are checked. Appends diagnostics; when
// stopAtFirst is set, returns after the first one.
void resolve_circuit(Circuit& c, bool fill, bool stopAtFirst,
                     std::vector<Diagnostic>& diags);

// Resolves a reference path (local name or instance.port) inside a scope.
// Returns the width, or 0 with a diagnostic appended.
unsigned resolve_ref_width(const ModuleScope& scope, const std::string& path,
                           int line, int col, std::vector<Diagnostic>& diags);

}  // namespace nail::nir::detail

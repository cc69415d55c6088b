// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "nail/nir/ast.hpp"

namespace nail::nir {

// Elaborated, hierarchy-free view of a circuit: every signal of every
// instance appears once under its dotted instance path. Statements are
// rewritten so references use flat paths. Used by the validator's
// combinational-loop check and by the simulator.
struct FlatSignal {
  enum class Kind { TopInput, TopOutput, Comb, Reg };
  std::string path;
  unsigned width = 1;
  Kind kind = Kind::Comb;
  Value init = 0;  // Reg
};

struct FlatMem {
  std::string path;
  unsigned width = 1;
  std::uint64_t depth = 0;
};

struct FlatDesign {
  std::vector<FlatSignal> signals;
  std::vector<FlatMem> mems;
  std::vector<Stmt> stmts;  // paths flattened
  std::map<std::string, std::size_t> signalIndex;
  std::map<std::string, std::size_t> memIndex;

  std::size_t signal(const std::string& path) const;  // throws on miss
};

// Instance paths of every instance whose module matches `moduleName`.
std::vector<std::string> instance_paths(const Circuit& c,
                                        const std::string& moduleName);

// Flattens the subtree rooted at `topName`. The circuit must be free of
// recursive instantiation; unknown module references throw.
FlatDesign flatten(const Circuit& c, const std::string& topName);

}  // namespace nail::nir

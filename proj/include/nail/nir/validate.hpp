// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "nail/nir/ast.hpp"

namespace nail::nir {

// Structural validation. Returns an empty vector for a well-formed circuit.
// Checks, in order: name resolution and width consistency (E_UNRESOLVED,
// E_WIDTH), driver rules (E_MULTIDRIVE, E_UNDRIVEN), and combinational
// acyclicity after flattening each module's subtree (E_COMBLOOP).
std::vector<Diagnostic> validate_circuit(const Circuit& c);

}  // namespace nail::nir

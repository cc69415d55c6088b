// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "nail/nir/ast.hpp"

namespace nail::nir {

// Canonical text form: one statement per line, two-space indent steps,
// decimal literals. print_circuit(parse) round-trips structurally.
std::string print_circuit(const Circuit& c);
std::string print_expr(const Expr& e);

}  // namespace nail::nir

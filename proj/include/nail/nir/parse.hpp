// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "nail/nir/ast.hpp"

namespace nail::nir {

struct ParseResult {
  std::optional<Circuit> circuit;
  Diagnostic error;  // first error when !ok()
  bool ok() const { return circuit.has_value(); }
};

// Parses NIR text, resolves references and computes expression widths.
// Whitespace and line breaks are not significant; '#' starts a comment.
ParseResult parse_circuit(const std::string& text);

}  // namespace nail::nir

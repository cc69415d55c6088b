// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "nail/scan/descriptor.hpp"

namespace nail::scan {

// Macro-constants header for driver code. One NAIL_<CHAIN>_TOTAL_BITS line,
// then per field NAIL_<CHAIN>_<COMPONENT>_<FIELD>_OFFSET and ..._WIDTH in
// offset order. Names uppercased, '.' mapped to '_'; a name collision after
// sanitizing is an error.
std::string emit_companion(const ScanChainDescriptor& d);

}  // namespace nail::scan

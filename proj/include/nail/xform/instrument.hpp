// SPDX-License-Identifier: Apache-2.0
//
// The instrumentation pipeline: pass_condition inserts conditioner modules,
// pass_inject reroutes target drivers through injector modules, pass_wiring
// connects condition sources to conditioner sinks, pass_stitch threads the
// scan chain through every component and punches the top-level scan ports.
// instrument() runs all four and revalidates.
#pragma once

#include <utility>
#include <vector>

#include "nail/nir/ast.hpp"
#include "nail/scan/descriptor.hpp"
#include "nail/xform/annotations.hpp"

namespace nail::xform {

// A pending connection from a condition source signal to a conditioner sink
// port. scopeLevel 0: source lives in the conditioner's host module.
// scopeLevel 1: source lives in the host's parent; the wiring pass punches a
// fresh input port through the host.
struct WiringEndpoint {
  std::string hostModule;
  std::string sinkInstance;
  std::string sinkPort;
  std::string sourcePath;
  int scopeLevel = 0;
  unsigned width = 0;
};

struct ChainStats {
  std::string chainId;
  unsigned chainBits = 0;
  unsigned enableBuffers = 0;
  unsigned auxStateBits = 0;
  unsigned totalAddedStateBits = 0;
};

struct InstrumentResult {
  nir::Circuit circuit;
  std::vector<scan::ScanChainDescriptor> descriptors;
  std::vector<ChainStats> stats;
};

InstrumentResult instrument(const nir::Circuit& c,
                            const std::vector<FaultAnnotation>& anns);

std::pair<nir::Circuit, std::vector<WiringEndpoint>> pass_condition(
    const nir::Circuit& c, const std::vector<FaultAnnotation>& anns);

nir::Circuit pass_inject(const nir::Circuit& c,
                         const std::vector<FaultAnnotation>& anns);

nir::Circuit pass_wiring(const nir::Circuit& c,
                         const std::vector<WiringEndpoint>& endpoints);

std::pair<nir::Circuit, std::vector<scan::ScanChainDescriptor>> pass_stitch(
    const nir::Circuit& c, const std::vector<FaultAnnotation>& anns);

// Stats for the chains a full instrument() run would add (chain bits, enable
// buffers, auxiliary injector state).
std::vector<ChainStats> chain_stats(const nir::Circuit& c,
                                    const std::vector<FaultAnnotation>& anns);

}  // namespace nail::xform

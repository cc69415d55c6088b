// SPDX-License-Identifier: Apache-2.0
//
// Shared test fixtures: small NIR designs, annotation JSON, and helpers to
// parse and instrument them.
#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "nail/nir/parse.hpp"
#include "nail/scan/config.hpp"
#include "nail/scan/descriptor.hpp"
#include "nail/xform/annotations.hpp"
#include "nail/xform/instrument.hpp"

namespace fixtures {

// 31 x 64-bit register file with a one-stage write pipeline. x0 reads as 0
// and writes to it are dropped. Addresses are 5 bits, data 64 bits.
inline const char* kRegFile = R"(
circuit rf:
module rf:
  input wen: UInt<1>
  input waddr: UInt<5>
  input wdata: UInt<64>
  input raddr: UInt<5>
  output rdata: UInt<64>
  reg rf_wen: UInt<1> init 0
  reg rf_waddr: UInt<5> init 0
  reg rf_wdata: UInt<64> init 0
  mem regs: UInt<64> [31]
  wire mrd: UInt<64>
  rf_wen <= wen
  rf_waddr <= waddr
  rf_wdata <= wdata
  write regs[sub(rf_waddr, UInt<5>(1))] <= rf_wdata when and(rf_wen, neq(rf_waddr, UInt<5>(0)))
  read mrd <= regs[sub(raddr, UInt<5>(1))]
  rdata <= mux(eq(raddr, UInt<5>(0)), UInt<64>(0), mrd)
)";

// Conditional stuck-at on the write-data register, matched on write address.
inline const char* kRegFileAnn = R"({
  "chains": {
    "rocket": [
      {
        "target": "rf_wdata",
        "injector": "stuckAt",
        "condition": "$sf(targetAddr, 5) == waddr && wen"
      }
    ]
  }
})";

// Two parallel 1-bit paths; only one gets annotated.
inline const char* kDuo = R"(
circuit duo:
module duo:
  input a: UInt<1>
  input b: UInt<1>
  output x: UInt<1>
  output y: UInt<1>
  wire aw: UInt<1>
  wire bw: UInt<1>
  aw <= a
  bw <= b
  x <= aw
  y <= bw
)";

inline const char* kDuoAnn = R"({
  "chains": {
    "c0": [ { "target": "aw", "injector": "stuckAt" } ]
  }
})";

// Plain 8-bit feed-through; the wire in the middle is the injection target.
inline const char* kFeed = R"(
circuit feed:
module feed:
  input d: UInt<8>
  input ctl: UInt<1>
  output q: UInt<8>
  wire t: UInt<8>
  t <= d
  q <= t
)";

inline std::string feed_ann(const std::string& kind, bool conditioned) {
  std::string a = R"({"chains": {"c0": [ { "target": "t", "injector": ")" + kind + "\"";
  if (conditioned) a += R"(, "condition": "ctl")";
  a += " } ] } }";
  return a;
}

inline nail::nir::Circuit parse_or_throw(const std::string& text) {
  auto res = nail::nir::parse_circuit(text);
  if (!res.ok()) throw std::runtime_error("fixture parse failed: " + res.error.str());
  return std::move(*res.circuit);
}

inline nail::xform::InstrumentResult instrument_fixture(const char* design,
                                                        const std::string& annJson) {
  auto c = parse_or_throw(design);
  auto anns = nail::xform::annotations_from_json(annJson);
  return nail::xform::instrument(c, anns);
}

// The register-file configuration used across tests: match writes to x15,
// full mask, stuck value 0xC0FFEE.
inline nail::scan::ScanConfig rf_config(const nail::scan::ScanChainDescriptor& d) {
  auto desc = std::make_shared<const nail::scan::ScanChainDescriptor>(d);
  nail::scan::ScanConfig cfg(desc);
  cfg.set("rf_wdata_cond", "isActive", 1);
  cfg.set("rf_wdata_cond", "targetAddr", 15);
  cfg.set("rf_wdata_inj", "isActive", 1);
  cfg.set("rf_wdata_inj", "mask", ~nail::Value{0});
  cfg.set("rf_wdata_inj", "stuckValue", 0xC0FFEE);
  return cfg;
}

}  // namespace fixtures

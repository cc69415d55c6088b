// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nail/nir/ast.hpp"
#include "nail/nir/flatten.hpp"
#include "nail/scan/config.hpp"
#include "nail/sim/model.hpp"

namespace nail::sim {

struct FaultEvent {
  std::uint64_t cycle = 0;
  std::string chainId;
  std::string componentId;
  Value originalValue = 0;
  Value faultedValue = 0;

  bool operator==(const FaultEvent&) const = default;
};

struct ChainComponent {
  std::string componentId;  // descriptor-style id (<cid>_inj / <cid>_cond)
  std::string instPath;
  bool isInjector = false;
  int inSig = -1, outSig = -1, selSig = -1;  // injector probes
  std::vector<int> scanRegs;                 // nail_sf_* registers
};

struct ChainInfo {
  std::string chainId;
  int scanIn = -1, scanEn = -1, globalEn = -1, scanOut = -1;
  unsigned totalBits = 0;
  std::vector<ChainComponent> components;
};

// Cycle-accurate interpreter plus the scan controller. Two-phase stepping:
// inputs and controller overrides apply, combinational logic settles, fault
// probes sample, then registers and memories commit from pre-edge values.
class Simulator {
 public:
  explicit Simulator(const nir::Circuit& c);

  const nir::FlatDesign& design() const { return fd_; }
  std::uint64_t cycle() const { return cycle_; }

  // Top-level input; controller-owned scan ports are rejected.
  void poke(const std::string& path, Value v);
  // Any signal; settles combinational logic first if needed.
  Value value(const std::string& path);
  Value value(std::size_t sig);
  Value mem_word(const std::string& path, std::uint64_t addr) const;
  void step();

  std::vector<std::string> chain_ids() const;
  const ChainInfo& chain(const std::string& chainId) const;
  bool controller_owned(const std::string& inputPath) const;

  // Serial load: scan_en asserted, payload bit 0 first, one bit per cycle
  // for totalBits cycles. Requires a verified checksum, an exact payload
  // length, and the chain's enable off.
  void begin_serial_load(const std::string& chainId, const scan::PackedConfig& p);
  bool loading(const std::string& chainId) const;
  void load_serial(const std::string& chainId, const scan::PackedConfig& p);
  // Broadside load: writes every scan-field register in zero cycles.
  void load_broadside(const std::string& chainId, const scan::ScanConfig& cfg);

  void set_enable(const std::string& chainId, bool on);
  bool enabled(const std::string& chainId) const;

  // One cycle with scan_en=1 and scan_in=0; returns scan_out as sampled
  // during that cycle. After a load, the first call emits payload bit 0.
  Value shift_step(const std::string& chainId);

  // Scan-field register values, keyed by flattened path.
  std::map<std::string, Value> scan_state(const std::string& chainId) const;

  const std::vector<FaultEvent>& fault_events() const { return events_; }
  std::vector<FaultEvent> take_fault_events();

 private:
  struct Ctl {
    bool enable = false;
    std::vector<std::uint8_t> pending;
    std::size_t at = 0;
    bool manualShift = false;
    Value lastScanOut = 0;
  };

  void eval();
  void commit();
  void set_raw(int sig, Value v);
  Ctl& ctl(const std::string& chainId);
  const ChainInfo& chain_checked(const std::string& chainId) const;

  nir::FlatDesign fd_;
  SimProgram prog_;
  std::vector<Value> vals_;
  std::vector<std::vector<Value>> mems_;
  std::vector<Value> stack_;
  std::vector<Value> regStage_;
  bool dirty_ = true;
  std::uint64_t cycle_ = 0;
  std::vector<ChainInfo> chains_;
  std::map<std::string, std::size_t> chainIndex_;
  std::map<std::string, Ctl> ctl_;
  std::vector<FaultEvent> events_;
};

}  // namespace nail::sim

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nail/sim/simulator.hpp"

namespace nail::sim {

// Input waveform: explicit values at named cycles, held until changed.
// Cycle 0 must cover every functional top-level input.
struct Stimulus {
  struct Entry {
    std::uint64_t cycle = 0;
    std::vector<std::pair<std::string, Value>> set;
  };
  std::uint64_t cycles = 0;
  std::vector<Entry> inputs;
};

Stimulus stimulus_from_json(const std::string& text);
std::string stimulus_to_json(const Stimulus& s);

struct Trace {
  std::vector<std::string> signals;        // sorted output names
  std::vector<std::vector<Value>> rows;    // rows[cycle][signal]

  bool operator==(const Trace&) const = default;
};

struct DivergenceReport {
  bool diverged = false;
  std::uint64_t cycle = 0;  // meaningful when diverged
  std::vector<std::string> signals;
};

Trace trace_from_json(const std::string& text);
std::string trace_to_json(const Trace& t);

DivergenceReport diff_runs(const Trace& a, const Trace& b);
std::string divergence_to_json(const DivergenceReport& r);
std::string fault_log_to_jsonl(const std::vector<FaultEvent>& log);

struct Schedule {
  std::uint64_t loadCycle = 0;
  std::optional<std::uint64_t> enableCycle;
  std::optional<std::uint64_t> disableCycle;
};

struct CampaignResult {
  Trace golden, faulty;
  std::vector<FaultEvent> log;
  DivergenceReport report;
};

// Runs baseline and instrumented models on the same stimulus; the controller
// serially loads `cfg` at loadCycle and toggles the chain enable per the
// schedule. Traces cover the shared functional outputs only.
CampaignResult run_campaign(const nir::Circuit& baseline,
                            const nir::Circuit& instrumented,
                            const std::string& chainId,  // empty: the only chain
                            const scan::PackedConfig& cfg, const Stimulus& stim,
                            const Schedule& sched);

// Plain stimulus run with no controller activity; trace of all outputs
// except scan_out_* of discovered chains.
Trace run_trace(Simulator& sim, const Stimulus& stim);

}  // namespace nail::sim

// SPDX-License-Identifier: Apache-2.0
#include "nail/sim/campaign.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace nail::sim {

using ojson = nlohmann::ordered_json;

namespace {

Value value_from_json(const ojson& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      std::size_t used = 0;
      Value v = std::stoull(s, &used, 0);
      if (used == s.size() && !s.empty()) return v;
    } catch (...) {
    }
    fail(ErrKind::Parse, "bad numeric string for " + where + ": \"" + s + "\"");
  }
  fail(ErrKind::Parse, where + " must be an unsigned number or a numeric string");
}

}  // namespace

Stimulus stimulus_from_json(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const std::exception& e) {
    fail(ErrKind::Parse, std::string("bad stimulus JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("cycles") || !j["cycles"].is_number_unsigned())
    fail(ErrKind::Parse, "stimulus JSON needs an unsigned \"cycles\" field");
  Stimulus s;
  s.cycles = j["cycles"].get<std::uint64_t>();
  if (j.contains("inputs")) {
    if (!j["inputs"].is_array()) fail(ErrKind::Parse, "stimulus \"inputs\" must be an array");
    for (const auto& je : j["inputs"]) {
      if (!je.is_object() || !je.contains("cycle") || !je["cycle"].is_number_unsigned() ||
          !je.contains("set") || !je["set"].is_object())
        fail(ErrKind::Parse, "each stimulus entry needs \"cycle\" and a \"set\" object");
      Stimulus::Entry e;
      e.cycle = je["cycle"].get<std::uint64_t>();
      if (e.cycle >= s.cycles)
        fail(ErrKind::Validate, "stimulus entry at cycle " + std::to_string(e.cycle) +
                                    " is outside the run of " + std::to_string(s.cycles) +
                                    " cycles");
      for (const auto& [name, jv] : je["set"].items())
        e.set.emplace_back(name, value_from_json(jv, "input " + name));
      s.inputs.push_back(std::move(e));
    }
  }
  return s;
}

std::string stimulus_to_json(const Stimulus& s) {
  ojson j;
  j["cycles"] = s.cycles;
  j["inputs"] = ojson::array();
  for (const auto& e : s.inputs) {
    ojson je;
    je["cycle"] = e.cycle;
    ojson set = ojson::object();
    for (const auto& [name, v] : e.set) set[name] = v;
    je["set"] = std::move(set);
    j["inputs"].push_back(std::move(je));
  }
  return j.dump(2) + "\n";
}

Trace trace_from_json(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const std::exception& e) {
    fail(ErrKind::Parse, std::string("bad trace JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("signals") || !j["signals"].is_array() ||
      !j.contains("rows") || !j["rows"].is_array())
    fail(ErrKind::Parse, "trace JSON needs \"signals\" and \"rows\" arrays");
  Trace t;
  for (const auto& js : j["signals"]) {
    if (!js.is_string()) fail(ErrKind::Parse, "trace signal names must be strings");
    t.signals.push_back(js.get<std::string>());
  }
  for (const auto& jr : j["rows"]) {
    if (!jr.is_array() || jr.size() != t.signals.size())
      fail(ErrKind::Parse, "each trace row must list one value per signal");
    std::vector<Value> row;
    for (const auto& jv : jr) row.push_back(value_from_json(jv, "trace value"));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string trace_to_json(const Trace& t) {
  ojson j;
  j["signals"] = t.signals;
  ojson rows = ojson::array();
  for (const auto& row : t.rows) rows.push_back(row);
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

DivergenceReport diff_runs(const Trace& a, const Trace& b) {
  if (a.signals != b.signals || a.rows.size() != b.rows.size())
    fail(ErrKind::Validate, "trace shape mismatch: runs cover different signals or lengths");
  DivergenceReport r;
  for (std::size_t t = 0; t < a.rows.size(); ++t) {
    if (a.rows[t] == b.rows[t]) continue;
    r.diverged = true;
    r.cycle = t;
    for (std::size_t i = 0; i < a.signals.size(); ++i)
      if (a.rows[t][i] != b.rows[t][i]) r.signals.push_back(a.signals[i]);
    break;
  }
  return r;
}

std::string divergence_to_json(const DivergenceReport& r) {
  ojson j;
  j["diverged"] = r.diverged;
  if (r.diverged) j["cycle"] = r.cycle;
  j["signals"] = r.signals;
  return j.dump(2) + "\n";
}

std::string fault_log_to_jsonl(const std::vector<FaultEvent>& log) {
  std::string out;
  for (const auto& e : log) {
    ojson j;
    j["cycle"] = e.cycle;
    j["chainId"] = e.chainId;
    j["componentId"] = e.componentId;
    j["originalValue"] = e.originalValue;
    j["faultedValue"] = e.faultedValue;
    out += j.dump();
    out += '\n';
  }
  return out;
}

namespace {

// Functional outputs: every top-level output except the scan_out of each
// discovered chain. Sorted so traces from different models line up.
std::vector<std::pair<std::string, std::size_t>> functional_outputs(const Simulator& sim) {
  std::set<int> scanOuts;
  for (const auto& id : sim.chain_ids()) scanOuts.insert(sim.chain(id).scanOut);
  std::vector<std::pair<std::string, std::size_t>> outs;
  const auto& sigs = sim.design().signals;
  for (std::size_t i = 0; i < sigs.size(); ++i)
    if (sigs[i].kind == nir::FlatSignal::Kind::TopOutput && !scanOuts.count(static_cast<int>(i)))
      outs.emplace_back(sigs[i].path, i);
  std::sort(outs.begin(), outs.end());
  return outs;
}

std::vector<std::string> functional_inputs(const Simulator& sim) {
  std::vector<std::string> ins;
  for (const auto& s : sim.design().signals)
    if (s.kind == nir::FlatSignal::Kind::TopInput && !sim.controller_owned(s.path))
      ins.push_back(s.path);
  std::sort(ins.begin(), ins.end());
  return ins;
}

void check_stimulus(const Simulator& sim, const Stimulus& stim) {
  auto ins = functional_inputs(sim);
  std::set<std::string> known(ins.begin(), ins.end());
  std::set<std::string> atZero;
  for (const auto& e : stim.inputs) {
    if (e.cycle >= stim.cycles)
      fail(ErrKind::Validate, "stimulus entry at cycle " + std::to_string(e.cycle) +
                                  " is outside the run of " + std::to_string(stim.cycles) +
                                  " cycles");
    for (const auto& [name, v] : e.set) {
      (void)v;
      if (!known.count(name))
        fail(ErrKind::Validate, "stimulus drives \"" + name +
                                    "\", which is not a functional top-level input");
      if (e.cycle == 0) atZero.insert(name);
    }
  }
  if (stim.cycles == 0) return;
  for (const auto& name : ins)
    if (!atZero.count(name))
      fail(ErrKind::Validate, "cycle 0 of the stimulus does not set input \"" + name + "\"");
}

void apply_stimulus(Simulator& sim, const Stimulus& stim, std::uint64_t t) {
  for (const auto& e : stim.inputs)
    if (e.cycle == t)
      for (const auto& [name, v] : e.set) sim.poke(name, v);
}

}  // namespace

Trace run_trace(Simulator& sim, const Stimulus& stim) {
  check_stimulus(sim, stim);
  auto outs = functional_outputs(sim);
  Trace tr;
  for (const auto& [name, sig] : outs) {
    (void)sig;
    tr.signals.push_back(name);
  }
  for (std::uint64_t t = 0; t < stim.cycles; ++t) {
    apply_stimulus(sim, stim, t);
    std::vector<Value> row;
    row.reserve(outs.size());
    for (const auto& [name, sig] : outs) {
      (void)name;
      row.push_back(sim.value(sig));
    }
    tr.rows.push_back(std::move(row));
    sim.step();
  }
  return tr;
}

CampaignResult run_campaign(const nir::Circuit& baseline, const nir::Circuit& instrumented,
                            const std::string& chainId, const scan::PackedConfig& cfg,
                            const Stimulus& stim, const Schedule& sched) {
  Simulator golden(baseline);
  Simulator faulty(instrumented);

  std::string chain = chainId;
  if (chain.empty()) {
    auto ids = faulty.chain_ids();
    if (ids.size() != 1)
      fail(ErrKind::Validate, "a chain id is required: the design exposes " +
                                  std::to_string(ids.size()) + " scan chains");
    chain = ids.front();
  } else {
    faulty.chain(chain);  // throws if unknown
  }

  auto goldenOuts = functional_outputs(golden);
  auto faultyOuts = functional_outputs(faulty);
  {
    std::vector<std::string> a, b;
    for (const auto& [n, s] : goldenOuts) {
      (void)s;
      a.push_back(n);
    }
    for (const auto& [n, s] : faultyOuts) {
      (void)s;
      b.push_back(n);
    }
    if (a != b)
      fail(ErrKind::Validate,
           "baseline and instrumented designs expose different functional outputs");
  }
  if (functional_inputs(golden) != functional_inputs(faulty))
    fail(ErrKind::Validate,
         "baseline and instrumented designs expose different functional inputs");

  check_stimulus(golden, stim);
  check_stimulus(faulty, stim);

  CampaignResult res;
  for (const auto& [name, sig] : goldenOuts) {
    (void)sig;
    res.golden.signals.push_back(name);
    res.faulty.signals.push_back(name);
  }

  for (std::uint64_t t = 0; t < stim.cycles; ++t) {
    apply_stimulus(golden, stim, t);
    apply_stimulus(faulty, stim, t);

    if (t == sched.loadCycle) faulty.begin_serial_load(chain, cfg);
    if (sched.enableCycle && t == *sched.enableCycle) faulty.set_enable(chain, true);
    if (sched.disableCycle && t == *sched.disableCycle) faulty.set_enable(chain, false);

    std::vector<Value> g, f;
    g.reserve(goldenOuts.size());
    f.reserve(faultyOuts.size());
    for (const auto& [name, sig] : goldenOuts) {
      (void)name;
      g.push_back(golden.value(sig));
    }
    for (const auto& [name, sig] : faultyOuts) {
      (void)name;
      f.push_back(faulty.value(sig));
    }
    res.golden.rows.push_back(std::move(g));
    res.faulty.rows.push_back(std::move(f));

    golden.step();
    faulty.step();
  }

  res.log = faulty.take_fault_events();
  res.report = diff_runs(res.golden, res.faulty);
  return res;
}

}  // namespace nail::sim

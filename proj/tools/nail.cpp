// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Every subcommand is a thin shell over the library;
// see README.md for the file formats involved.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nail/common.hpp"
#include "nail/nir/parse.hpp"
#include "nail/nir/print.hpp"
#include "nail/scan/companion.hpp"
#include "nail/scan/config.hpp"
#include "nail/scan/descriptor.hpp"
#include "nail/sim/campaign.hpp"
#include "nail/xform/annotations.hpp"
#include "nail/xform/instrument.hpp"

namespace {

int exit_code(nail::ErrKind kind) {
  switch (kind) {
    case nail::ErrKind::Io: return 2;
    case nail::ErrKind::Parse: return 3;
    case nail::ErrKind::Validate: return 4;
    case nail::ErrKind::Checksum: return 5;
    case nail::ErrKind::Internal: return 6;
  }
  return 6;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) nail::fail(nail::ErrKind::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) nail::fail(nail::ErrKind::Io, "read failed on " + path);
  return ss.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) nail::fail(nail::ErrKind::Io, "cannot write " + path);
  out << content;
  out.flush();
  if (!out) nail::fail(nail::ErrKind::Io, "write failed on " + path);
}

nail::nir::Circuit load_design(const std::string& path) {
  auto res = nail::nir::parse_circuit(read_text(path));
  if (!res.ok())
    nail::fail(nail::ErrKind::Parse, path + ": " + res.error.str());
  return std::move(*res.circuit);
}

nail::Value parse_value(const std::string& text) {
  std::size_t used = 0;
  nail::Value v = 0;
  try {
    v = std::stoull(text, &used, 0);
  } catch (...) {
    used = 0;
  }
  if (used != text.size() || text.empty())
    nail::fail(nail::ErrKind::Parse, "bad numeric value \"" + text + "\"");
  return v;
}

// Descriptor output path for one chain. A single chain takes the requested
// path as-is; with several chains the chain id lands before the extension.
std::string descriptor_path(const std::string& base, const std::string& chainId,
                            bool soleChain) {
  if (soleChain) return base;
  auto dot = base.rfind('.');
  auto slash = base.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return base + "." + chainId;
  return base.substr(0, dot) + "." + chainId + base.substr(dot);
}

struct InstrumentArgs {
  std::string design, annotations, out, descriptor;
};

int cmd_instrument(const InstrumentArgs& a) {
  auto circuit = load_design(a.design);
  auto anns = nail::xform::annotations_from_json(read_text(a.annotations));
  auto res = nail::xform::instrument(circuit, anns);
  write_text(a.out, nail::nir::print_circuit(res.circuit));
  const bool sole = res.descriptors.size() == 1;
  for (const auto& d : res.descriptors)
    write_text(descriptor_path(a.descriptor, d.chainId, sole),
               nail::scan::descriptor_to_json(d));
  for (const auto& s : res.stats)
    std::cout << "chain " << s.chainId << ": chainBits=" << s.chainBits
              << " enableBuffers=" << s.enableBuffers
              << " auxStateBits=" << s.auxStateBits
              << " totalAddedStateBits=" << s.totalAddedStateBits << "\n";
  return 0;
}

struct PackArgs {
  std::string descriptor, out;
  std::vector<std::string> sets;
};

int cmd_pack(const PackArgs& a) {
  auto desc = std::make_shared<const nail::scan::ScanChainDescriptor>(
      nail::scan::descriptor_from_json(read_text(a.descriptor)));
  nail::scan::ScanConfig cfg(desc);
  for (const auto& s : a.sets) {
    auto eq = s.find('=');
    auto dot = s.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
      nail::fail(nail::ErrKind::Parse,
                 "--set expects component.field=value, got \"" + s + "\"");
    cfg.set(s.substr(0, dot), s.substr(dot + 1, eq - dot - 1),
            parse_value(s.substr(eq + 1)));
  }
  nail::scan::write_packed_file(a.out, cfg.pack());
  return 0;
}

struct CompanionArgs {
  std::string descriptor, out;
};

int cmd_companion(const CompanionArgs& a) {
  auto desc = nail::scan::descriptor_from_json(read_text(a.descriptor));
  write_text(a.out, nail::scan::emit_companion(desc));
  return 0;
}

struct RunArgs {
  std::string baseline, design, config, stimulus, chain;
  std::uint64_t loadAt = 0;
  std::optional<std::uint64_t> enableAt, disableAt;
  std::string log, report, goldenTrace, faultyTrace;
};

int cmd_run(const RunArgs& a) {
  auto base = load_design(a.baseline);
  auto inst = load_design(a.design);
  auto cfg = nail::scan::read_packed_file(a.config);
  auto stim = nail::sim::stimulus_from_json(read_text(a.stimulus));
  nail::sim::Schedule sched;
  sched.loadCycle = a.loadAt;
  sched.enableCycle = a.enableAt;
  sched.disableCycle = a.disableAt;
  auto res = nail::sim::run_campaign(base, inst, a.chain, cfg, stim, sched);
  if (!a.log.empty()) write_text(a.log, nail::sim::fault_log_to_jsonl(res.log));
  if (!a.report.empty()) write_text(a.report, nail::sim::divergence_to_json(res.report));
  if (!a.goldenTrace.empty()) write_text(a.goldenTrace, nail::sim::trace_to_json(res.golden));
  if (!a.faultyTrace.empty()) write_text(a.faultyTrace, nail::sim::trace_to_json(res.faulty));
  std::cout << "faults logged: " << res.log.size() << "\n";
  if (res.report.diverged) {
    std::cout << "divergence at cycle " << res.report.cycle << ":";
    for (const auto& s : res.report.signals) std::cout << " " << s;
    std::cout << "\n";
  } else {
    std::cout << "no divergence\n";
  }
  return 0;
}

struct DiffArgs {
  std::string a, b, out;
};

int cmd_diff(const DiffArgs& d) {
  auto ta = nail::sim::trace_from_json(read_text(d.a));
  auto tb = nail::sim::trace_from_json(read_text(d.b));
  auto report = nail::sim::diff_runs(ta, tb);
  std::string text = nail::sim::divergence_to_json(report);
  if (!d.out.empty())
    write_text(d.out, text);
  else
    std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fault-injection instrumentation and cycle-accurate simulation for NIR designs"};
  app.require_subcommand(1);

  InstrumentArgs ia;
  auto* inst = app.add_subcommand(
      "instrument", "insert injectors and conditioners, stitch scan chains");
  inst->add_option("--design", ia.design, "input NIR design")->required();
  inst->add_option("--annotations", ia.annotations, "fault annotation JSON")->required();
  inst->add_option("--out", ia.out, "instrumented NIR output")->required();
  inst->add_option("--descriptor", ia.descriptor, "scan chain descriptor JSON output")
      ->required();

  PackArgs pa;
  auto* pack = app.add_subcommand("pack", "pack a scan configuration into a binary file");
  pack->add_option("--descriptor", pa.descriptor, "scan chain descriptor JSON")->required();
  pack->add_option("--set", pa.sets, "field setting, component.field=value (hex or decimal)");
  pack->add_option("--out", pa.out, "packed config output")->required();

  CompanionArgs ca;
  auto* comp = app.add_subcommand("companion", "emit the C header for a descriptor");
  comp->add_option("--descriptor", ca.descriptor, "scan chain descriptor JSON")->required();
  comp->add_option("--out", ca.out, "header output path")->required();

  RunArgs ra;
  auto* run = app.add_subcommand("run", "run a fault campaign against a golden model");
  run->add_option("--baseline", ra.baseline, "uninstrumented NIR design")->required();
  run->add_option("--design", ra.design, "instrumented NIR design")->required();
  run->add_option("--config", ra.config, "packed config file")->required();
  run->add_option("--stimulus", ra.stimulus, "stimulus JSON")->required();
  run->add_option("--chain", ra.chain, "chain id (defaults to the only chain)");
  run->add_option("--load-at", ra.loadAt, "cycle at which the serial load starts (default 0)");
  std::uint64_t enableAt = 0, disableAt = 0;
  auto* enOpt = run->add_option("--enable-at", enableAt, "cycle at which the chain enables");
  auto* disOpt = run->add_option("--disable-at", disableAt, "cycle at which the chain disables");
  run->add_option("--log", ra.log, "fault log output (JSONL)");
  run->add_option("--report", ra.report, "divergence report output (JSON)");
  run->add_option("--golden-trace", ra.goldenTrace, "golden trace output (JSON)");
  run->add_option("--faulty-trace", ra.faultyTrace, "faulty trace output (JSON)");

  DiffArgs da;
  auto* diff = app.add_subcommand("diff", "diff two trace files");
  diff->add_option("--a", da.a, "first trace JSON")->required();
  diff->add_option("--b", da.b, "second trace JSON")->required();
  diff->add_option("--out", da.out, "divergence report output (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (inst->parsed()) return cmd_instrument(ia);
    if (pack->parsed()) return cmd_pack(pa);
    if (comp->parsed()) return cmd_companion(ca);
    if (run->parsed()) {
      if (enOpt->count()) ra.enableAt = enableAt;
      if (disOpt->count()) ra.disableAt = disableAt;
      return cmd_run(ra);
    }
    if (diff->parsed()) return cmd_diff(da);
  } catch (const nail::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 6;
  }
  return 1;
}

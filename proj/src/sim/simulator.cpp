// SPDX-License-Identifier: Apache-2.0
#include "nail/sim/simulator.hpp"

#include <algorithm>

#include "nail/nir/validate.hpp"

namespace nail::sim {

namespace {

using nir::Expr;
using nir::FlatSignal;
using nir::Stmt;

bool has_prefix(const std::string& s, const std::string& prefix) {
  return s.size() >= prefix.size() && s.compare(0, prefix.size(), prefix) == 0;
}

std::string leaf_of(const std::string& path) {
  auto pos = path.rfind('.');
  return pos == std::string::npos ? path : path.substr(pos + 1);
}

}  // namespace

Simulator::Simulator(const nir::Circuit& c) {
  auto diags = nir::validate_circuit(c);
  if (!diags.empty())
    fail(ErrKind::Validate,
         "circuit does not validate: " + diags.front().str());
  fd_ = nir::flatten(c, c.top);
  prog_ = compile(fd_);
  vals_.assign(fd_.signals.size(), 0);
  for (std::size_t i = 0; i < fd_.signals.size(); ++i)
    if (fd_.signals[i].kind == FlatSignal::Kind::Reg) vals_[i] = fd_.signals[i].init;
  mems_.reserve(fd_.mems.size());
  for (const auto& m : fd_.mems) mems_.emplace_back(m.depth, 0);
  regStage_.assign(prog_.regs.size(), 0);

  // Chains: top-level port quadruples scan_in_<X> / scan_en_<X> /
  // global_en_<X> / scan_out_<X>.
  for (std::size_t i = 0; i < fd_.signals.size(); ++i) {
    const auto& s = fd_.signals[i];
    if (s.kind != FlatSignal::Kind::TopInput || !has_prefix(s.path, "scan_in_") ||
        s.width != 1)
      continue;
    const std::string id = s.path.substr(std::string("scan_in_").size());
    auto en = fd_.signalIndex.find("scan_en_" + id);
    auto ge = fd_.signalIndex.find("global_en_" + id);
    auto so = fd_.signalIndex.find("scan_out_" + id);
    if (en == fd_.signalIndex.end() || ge == fd_.signalIndex.end() ||
        so == fd_.signalIndex.end())
      continue;
    ChainInfo info;
    info.chainId = id;
    info.scanIn = static_cast<int>(i);
    info.scanEn = static_cast<int>(en->second);
    info.globalEn = static_cast<int>(ge->second);
    info.scanOut = static_cast<int>(so->second);
    chainIndex_[id] = chains_.size();
    chains_.push_back(std::move(info));
    ctl_[id] = Ctl{};
  }
  if (chains_.empty()) return;

  // Components: instances named nail_inj_* / nail_cond_* whose scan_en input
  // traces back through pure connects to one of the chain scan_en ports.
  std::map<std::string, const nir::ExprPtr*> driver;
  for (const auto& st : fd_.stmts)
    if (st.kind == Stmt::Kind::Connect) driver[st.lhs] = &st.rhs;
  for (std::size_t i = 0; i < fd_.signals.size(); ++i) {
    const auto& s = fd_.signals[i];
    if (s.kind != FlatSignal::Kind::Comb || !has_prefix(leaf_of(s.path), "scan_en"))
      continue;
    if (leaf_of(s.path) != "scan_en") continue;
    const std::string instPath = s.path.substr(0, s.path.size() - std::string(".scan_en").size());
    const std::string instLeaf = leaf_of(instPath);
    const bool isInj = has_prefix(instLeaf, "nail_inj_");
    const bool isCond = has_prefix(instLeaf, "nail_cond_");
    if (!isInj && !isCond) continue;
    // Trace to a top input.
    std::string cur = s.path;
    std::string chainId;
    for (int hop = 0; hop < 1'000'000; ++hop) {
      auto it = driver.find(cur);
      if (it == driver.end() || (*it->second)->kind != Expr::Kind::Ref) break;
      cur = (*it->second)->path;
      auto sit = fd_.signalIndex.find(cur);
      if (sit == fd_.signalIndex.end()) break;
      if (fd_.signals[sit->second].kind == FlatSignal::Kind::TopInput) {
        if (has_prefix(cur, "scan_en_")) chainId = cur.substr(std::string("scan_en_").size());
        break;
      }
    }
    if (chainId.empty() || chainIndex_.find(chainId) == chainIndex_.end()) continue;
    const std::string prefix =
        (isInj ? "nail_inj_" : "nail_cond_") + chainId + "_";
    if (!has_prefix(instLeaf, prefix)) continue;

    ChainComponent comp;
    comp.componentId = instLeaf.substr(prefix.size()) + (isInj ? "_inj" : "_cond");
    comp.instPath = instPath;
    comp.isInjector = isInj;
    if (isInj) {
      auto find = [&](const std::string& leaf) {
        auto it = fd_.signalIndex.find(instPath + "." + leaf);
        return it == fd_.signalIndex.end() ? -1 : static_cast<int>(it->second);
      };
      comp.inSig = find("in");
      comp.outSig = find("out");
      comp.selSig = find("nail_sel");
    }
    chains_[chainIndex_[chainId]].components.push_back(std::move(comp));
  }
  // Scan-field registers per component.
  for (auto& info : chains_) {
    for (auto& comp : info.components) {
      const std::string prefix = comp.instPath + ".nail_sf_";
      for (std::size_t i = 0; i < fd_.signals.size(); ++i) {
        const auto& s = fd_.signals[i];
        if (s.kind == FlatSignal::Kind::Reg && has_prefix(s.path, prefix) &&
            s.path.find('.', prefix.size()) == std::string::npos) {
          comp.scanRegs.push_back(static_cast<int>(i));
          info.totalBits += s.width;
        }
      }
    }
  }
}

void Simulator::eval() {
  for (const CombTask& t : prog_.comb) {
    if (t.mem >= 0) {
      Value addr = eval_program(t.prog, vals_, stack_);
      const auto& words = mems_[static_cast<std::size_t>(t.mem)];
      vals_[static_cast<std::size_t>(t.dst)] = addr < words.size() ? words[addr] : 0;
    } else {
      vals_[static_cast<std::size_t>(t.dst)] = eval_program(t.prog, vals_, stack_);
    }
  }
  dirty_ = false;
}

void Simulator::commit() {
  for (std::size_t i = 0; i < prog_.regs.size(); ++i)
    regStage_[i] = eval_program(prog_.regs[i].next, vals_, stack_);
  struct Wr {
    int mem;
    Value addr, data;
  };
  std::vector<Wr> writes;
  for (const MemWriteTask& t : prog_.memWrites) {
    if ((eval_program(t.en, vals_, stack_) & 1) == 0) continue;
    writes.push_back({t.mem, eval_program(t.addr, vals_, stack_),
                      eval_program(t.data, vals_, stack_)});
  }
  for (std::size_t i = 0; i < prog_.regs.size(); ++i)
    vals_[static_cast<std::size_t>(prog_.regs[i].dst)] = regStage_[i];
  for (const Wr& w : writes) {
    auto& words = mems_[static_cast<std::size_t>(w.mem)];
    if (w.addr < words.size()) words[w.addr] = w.data;
  }
  dirty_ = true;
}

void Simulator::set_raw(int sig, Value v) {
  auto idx = static_cast<std::size_t>(sig);
  if (vals_[idx] != v) {
    vals_[idx] = v;
    dirty_ = true;
  }
}

void Simulator::poke(const std::string& path, Value v) {
  auto idx = fd_.signal(path);
  const auto& s = fd_.signals[idx];
  if (s.kind != FlatSignal::Kind::TopInput)
    fail(ErrKind::Validate, "'" + path + "' is not a top-level input");
  if (controller_owned(path))
    fail(ErrKind::Validate, "'" + path + "' is controller-owned; use the load/enable interface");
  if (!fits(v, s.width))
    fail(ErrKind::Validate, "value does not fit " + std::to_string(s.width) +
                                "-bit input '" + path + "'");
  set_raw(static_cast<int>(idx), v);
}

Value Simulator::value(const std::string& path) { return value(fd_.signal(path)); }

Value Simulator::value(std::size_t sig) {
  if (dirty_) eval();
  return vals_[sig];
}

Value Simulator::mem_word(const std::string& path, std::uint64_t addr) const {
  auto it = fd_.memIndex.find(path);
  if (it == fd_.memIndex.end()) fail(ErrKind::Validate, "no memory '" + path + "'");
  const auto& words = mems_[it->second];
  return addr < words.size() ? words[addr] : 0;
}

void Simulator::step() {
  for (auto& info : chains_) {
    Ctl& s = ctl_[info.chainId];
    const bool shifting = s.at < s.pending.size() || s.manualShift;
    set_raw(info.scanEn, shifting ? 1 : 0);
    set_raw(info.scanIn, s.at < s.pending.size() ? s.pending[s.at] : 0);
    set_raw(info.globalEn, s.enable ? 1 : 0);
  }
  if (dirty_) eval();
  for (const auto& info : chains_) {
    Ctl& s = ctl_[info.chainId];
    s.lastScanOut = vals_[static_cast<std::size_t>(info.scanOut)];
    for (const auto& comp : info.components) {
      if (!comp.isInjector || comp.selSig < 0) continue;
      if (vals_[static_cast<std::size_t>(comp.selSig)] != 1) continue;
      Value in = vals_[static_cast<std::size_t>(comp.inSig)];
      Value out = vals_[static_cast<std::size_t>(comp.outSig)];
      if (in != out)
        events_.push_back({cycle_, info.chainId, comp.componentId, in, out});
    }
  }
  commit();
  ++cycle_;
  for (auto& [id, s] : ctl_) {
    if (s.at < s.pending.size()) {
      if (++s.at == s.pending.size()) {
        s.pending.clear();
        s.at = 0;
      }
    }
    s.manualShift = false;
  }
}

std::vector<std::string> Simulator::chain_ids() const {
  std::vector<std::string> out;
  out.reserve(chains_.size());
  for (const auto& c : chains_) out.push_back(c.chainId);
  return out;
}

const ChainInfo& Simulator::chain_checked(const std::string& chainId) const {
  auto it = chainIndex_.find(chainId);
  if (it == chainIndex_.end())
    fail(ErrKind::Validate, "no scan chain '" + chainId + "' in this design");
  return chains_[it->second];
}

const ChainInfo& Simulator::chain(const std::string& chainId) const {
  return chain_checked(chainId);
}

Simulator::Ctl& Simulator::ctl(const std::string& chainId) {
  chain_checked(chainId);
  return ctl_[chainId];
}

bool Simulator::controller_owned(const std::string& inputPath) const {
  for (const auto& c : chains_) {
    const auto idx = fd_.signalIndex.find(inputPath);
    if (idx == fd_.signalIndex.end()) return false;
    int i = static_cast<int>(idx->second);
    if (i == c.scanIn || i == c.scanEn || i == c.globalEn) return true;
  }
  return false;
}

void Simulator::begin_serial_load(const std::string& chainId,
                                  const scan::PackedConfig& p) {
  const ChainInfo& info = chain_checked(chainId);
  Ctl& s = ctl_[chainId];
  if (!p.checksum_ok())
    fail(ErrKind::Checksum, "packed config checksum mismatch; load rejected");
  const std::size_t need = (info.totalBits + 7) / 8;
  if (p.payload.size() != need)
    fail(ErrKind::Validate, "payload is " + std::to_string(p.payload.size()) +
                                " bytes; chain '" + chainId + "' needs " +
                                std::to_string(need));
  if (s.enable)
    fail(ErrKind::Validate, "load attempted while chain '" + chainId + "' is enabled");
  if (s.at < s.pending.size())
    fail(ErrKind::Validate, "chain '" + chainId + "' is already shifting");
  s.pending.resize(info.totalBits);
  for (unsigned k = 0; k < info.totalBits; ++k)
    s.pending[k] = (p.payload[k / 8] >> (k % 8)) & 1;
  s.at = 0;
}

bool Simulator::loading(const std::string& chainId) const {
  auto it = ctl_.find(chainId);
  if (it == ctl_.end()) fail(ErrKind::Validate, "no scan chain '" + chainId + "'");
  return it->second.at < it->second.pending.size();
}

void Simulator::load_serial(const std::string& chainId, const scan::PackedConfig& p) {
  begin_serial_load(chainId, p);
  while (loading(chainId)) step();
}

void Simulator::load_broadside(const std::string& chainId,
                               const scan::ScanConfig& cfg) {
  const ChainInfo& info = chain_checked(chainId);
  Ctl& s = ctl_[chainId];
  if (!cfg.descriptor_ptr()) fail(ErrKind::Internal, "config without descriptor");
  if (s.enable)
    fail(ErrKind::Validate, "load attempted while chain '" + chainId + "' is enabled");
  if (s.at < s.pending.size())
    fail(ErrKind::Validate, "chain '" + chainId + "' is already shifting");
  const auto& d = cfg.descriptor();
  if (d.totalWidth != info.totalBits)
    fail(ErrKind::Validate, "descriptor totalWidth " + std::to_string(d.totalWidth) +
                                " does not match chain width " +
                                std::to_string(info.totalBits));
  for (const auto& e : d.entries) {
    std::string instLeaf;
    if (e.kind == scan::ComponentKind::Conditioner) {
      if (!e.componentId.ends_with("_cond"))
        fail(ErrKind::Validate, "conditioner entry '" + e.componentId +
                                    "' does not end with _cond");
      instLeaf = "nail_cond_" + chainId + "_" +
                 e.componentId.substr(0, e.componentId.size() - 5);
    } else {
      if (!e.componentId.ends_with("_inj"))
        fail(ErrKind::Validate, "injector entry '" + e.componentId +
                                    "' does not end with _inj");
      instLeaf = "nail_inj_" + chainId + "_" +
                 e.componentId.substr(0, e.componentId.size() - 4);
    }
    const ChainComponent* comp = nullptr;
    for (const auto& cc : info.components)
      if (leaf_of(cc.instPath) == instLeaf) comp = &cc;
    if (comp == nullptr)
      fail(ErrKind::Validate, "no component instance '" + instLeaf + "' on chain '" +
                                  chainId + "'");
    for (const auto& f : e.fields) {
      const std::string regPath = comp->instPath + ".nail_sf_" + f.name;
      auto it = fd_.signalIndex.find(regPath);
      if (it == fd_.signalIndex.end())
        fail(ErrKind::Validate, "no scan field register '" + regPath + "'");
      const auto& sig = fd_.signals[it->second];
      if (sig.kind != FlatSignal::Kind::Reg || sig.width != f.width)
        fail(ErrKind::Validate, "scan field register '" + regPath +
                                    "' does not match descriptor width");
      set_raw(static_cast<int>(it->second), cfg.get(e.componentId, f.name));
    }
  }
}

void Simulator::set_enable(const std::string& chainId, bool on) {
  chain_checked(chainId);
  Ctl& s = ctl_[chainId];
  if (on && (s.at < s.pending.size() || s.manualShift))
    fail(ErrKind::Validate,
         "cannot enable chain '" + chainId + "' while it is shifting");
  s.enable = on;
}

bool Simulator::enabled(const std::string& chainId) const {
  auto it = ctl_.find(chainId);
  if (it == ctl_.end()) fail(ErrKind::Validate, "no scan chain '" + chainId + "'");
  return it->second.enable;
}

Value Simulator::shift_step(const std::string& chainId) {
  chain_checked(chainId);
  Ctl& s = ctl_[chainId];
  if (s.at < s.pending.size())
    fail(ErrKind::Validate, "chain '" + chainId + "' is loading; step() it instead");
  if (s.enable)
    fail(ErrKind::Validate,
         "cannot shift chain '" + chainId + "' while it is enabled");
  s.manualShift = true;
  step();
  return s.lastScanOut;
}

std::map<std::string, Value> Simulator::scan_state(const std::string& chainId) const {
  const ChainInfo& info = chain_checked(chainId);
  std::map<std::string, Value> out;
  for (const auto& comp : info.components)
    for (int r : comp.scanRegs)
      out[fd_.signals[static_cast<std::size_t>(r)].path] =
          vals_[static_cast<std::size_t>(r)];
  return out;
}

std::vector<FaultEvent> Simulator::take_fault_events() {
  std::vector<FaultEvent> out;
  out.swap(events_);
  return out;
}

}  // namespace nail::sim

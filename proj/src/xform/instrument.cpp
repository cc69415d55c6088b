// SPDX-License-Identifier: Apache-2.0
#include "nail/xform/instrument.hpp"

#include <functional>
#include <map>
#include <set>

#include "nail/cond/cond.hpp"
#include "nail/nir/validate.hpp"

namespace nail::xform {

namespace {

using nir::Circuit;
using nir::Decl;
using nir::Expr;
using nir::ExprPtr;
using nir::ModuleDef;
using nir::Port;
using nir::PortDir;
using nir::Stmt;
using inject::InjectorKind;

std::string sanitize_path(const std::string& path) {
  std::string out = path;
  for (char& c : out)
    if (c == '.') c = '_';
  return out;
}

// --- hierarchy facts -------------------------------------------------------

struct HierStep {
  std::string instName;
  std::string moduleName;
};

struct Hier {
  // Number of distinct instance paths from the top, capped at 2.
  std::map<std::string, int> pathCount;
  // For singleton modules: the steps from top down to the module.
  std::map<std::string, std::vector<HierStep>> chainTo;
  // For singleton non-top modules: (parent module, instance name in parent).
  std::map<std::string, HierStep> parentOf;

  bool singleton(const std::string& m) const {
    auto it = pathCount.find(m);
    return it != pathCount.end() && it->second == 1;
  }
  std::size_t depth(const std::string& m) const { return chainTo.at(m).size(); }
};

Hier build_hier(const Circuit& c) {
  Hier h;
  std::vector<HierStep> path;
  std::function<void(const ModuleDef&)> walk = [&](const ModuleDef& m) {
    int& count = h.pathCount[m.name];
    ++count;
    if (count > 2) return;
    if (count == 1) {
      h.chainTo[m.name] = path;
      if (!path.empty())
        h.parentOf[m.name] = HierStep{path.back().instName,
                                      path.size() >= 2 ? path[path.size() - 2].moduleName
                                                       : c.top};
    }
    for (const auto& d : m.decls) {
      if (d.kind != Decl::Kind::Instance) continue;
      const auto* child = c.find_module(d.moduleName);
      if (child == nullptr) continue;
      path.push_back(HierStep{d.name, d.moduleName});
      walk(*child);
      path.pop_back();
    }
  };
  const auto* top = c.find_module(c.top);
  if (top == nullptr) fail(ErrKind::Validate, "top module not found");
  walk(*top);
  return h;
}

// --- annotation resolution -------------------------------------------------

struct ResolvedAnn {
  FaultAnnotation ann;
  std::string componentId;
  std::string hostModule;  // module holding the target's driver
  std::string targetRef;   // ref path within hostModule
  unsigned width = 0;
  bool hasCond = false;
  cond::ParsedCondition parsed;
  std::string condName;  // conditioner module/instance name
  std::string injName;   // injector module/instance name
};

[[noreturn]] void bad_ann(const FaultAnnotation& a, const std::string& why) {
  fail(ErrKind::Validate, "annotation '" + a.target + "': " + why);
}

std::vector<ResolvedAnn> resolve_annotations(const Circuit& c, const Hier& h,
                                             const std::vector<FaultAnnotation>& anns) {
  std::vector<ResolvedAnn> out;
  std::set<std::pair<std::string, std::string>> ids;
  for (const auto& a : anns) {
    ResolvedAnn ra;
    ra.ann = a;
    if (!is_identifier(a.chainId)) bad_ann(a, "chainId is not an identifier");
    auto segs = split_path(a.target);
    if (segs.empty()) bad_ann(a, "empty target path");
    for (const auto& s : segs)
      if (!is_identifier(s)) bad_ann(a, "target is not a dotted identifier path");

    ra.componentId = a.componentId.empty() ? segs.back() : a.componentId;
    if (!is_identifier(ra.componentId)) bad_ann(a, "componentId is not an identifier");
    if (!ids.insert({a.chainId, ra.componentId}).second)
      bad_ann(a, "duplicate componentId '" + ra.componentId + "' in chain '" +
                     a.chainId + "'");

    // Walk the instance segments from the top.
    std::vector<std::string> walkMods{c.top};
    const ModuleDef* m = c.find_module(c.top);
    if (m == nullptr) fail(ErrKind::Validate, "top module not found");
    for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
      const Decl* d = m->find_decl(segs[i]);
      if (d == nullptr || d->kind != Decl::Kind::Instance)
        bad_ann(a, "'" + segs[i] + "' is not an instance in module '" + m->name + "'");
      m = c.find_module(d->moduleName);
      if (m == nullptr) bad_ann(a, "instance module '" + d->moduleName + "' not found");
      walkMods.push_back(m->name);
    }

    const std::string& leaf = segs.back();
    const Port* port = m->find_port(leaf);
    const Decl* decl = m->find_decl(leaf);
    if (port != nullptr) {
      if (port->dir == PortDir::Output) {
        ra.hostModule = m->name;
        ra.targetRef = leaf;
      } else {
        // Input ports are driven in the instantiating module.
        if (segs.size() < 2) bad_ann(a, "cannot target an input of the top module");
        ra.hostModule = walkMods[walkMods.size() - 2];
        ra.targetRef = segs[segs.size() - 2] + "." + leaf;
      }
      ra.width = port->width;
    } else if (decl != nullptr) {
      if (decl->kind == Decl::Kind::Wire || decl->kind == Decl::Kind::Reg) {
        ra.hostModule = m->name;
        ra.targetRef = leaf;
        ra.width = decl->width;
      } else if (decl->kind == Decl::Kind::Mem) {
        bad_ann(a, "target is a memory; target its read or write data signal instead");
      } else {
        bad_ann(a, "target is an instance, not a signal");
      }
    } else {
      bad_ann(a, "no signal '" + leaf + "' in module '" + m->name + "'");
    }

    if (!h.singleton(ra.hostModule))
      bad_ann(a, "module '" + ra.hostModule +
                     "' is instantiated more than once (or unreachable); targets must "
                     "resolve through singly instantiated modules");

    ra.condName = "nail_cond_" + a.chainId + "_" + ra.componentId;
    ra.injName = "nail_inj_" + a.chainId + "_" + ra.componentId;

    if (a.condition) {
      ra.hasCond = true;
      const ModuleDef* host = c.find_module(ra.hostModule);
      std::vector<const ModuleDef*> scopes{host};
      auto pit = h.parentOf.find(ra.hostModule);
      if (pit != h.parentOf.end()) scopes.push_back(c.find_module(pit->second.moduleName));
      auto res = cond::parse_condition_scoped(*a.condition, c,
                                              std::span<const ModuleDef* const>(scopes));
      if (!res.ok())
        bad_ann(a, "condition does not parse: " + res.error.str());
      ra.parsed = *res.parsed;
      for (const auto& f : ra.parsed.fields)
        if (f.name == "isActive")
          bad_ann(a, "scan field name 'isActive' is reserved");
    }
    out.push_back(std::move(ra));
  }
  return out;
}

// --- generated module plumbing ---------------------------------------------

ExprPtr bit0(const ExprPtr& e) { return Expr::bits(e, 0, 0); }

ExprPtr ref_of(const std::string& path, unsigned w) { return Expr::ref(path, w); }

ExprPtr and2(ExprPtr a, ExprPtr b) {
  return Expr::binary(nir::BinOp::And, std::move(a), std::move(b));
}

// Shift path through `fields` (name, width), fields[0] nearest scan_out:
// scan_in feeds the MSB of the last field, each field's bit 0 feeds the
// previous field's MSB, and field 0's bit 0 drives scan_out.
void add_scan_shift(ModuleDef& m, const std::vector<inject::FieldSpec>& fields) {
  for (std::size_t j = 0; j < fields.size(); ++j) {
    const auto& f = fields[j];
    const std::string reg = "nail_sf_" + f.name;
    ExprPtr inbit =
        (j + 1 == fields.size())
            ? ref_of("scan_in", 1)
            : bit0(ref_of("nail_sf_" + fields[j + 1].name, fields[j + 1].width));
    ExprPtr cur = ref_of(reg, f.width);
    ExprPtr next = f.width == 1
                       ? inbit
                       : Expr::binary(nir::BinOp::Cat, inbit,
                                      Expr::bits(cur, f.width - 1, 1));
    m.stmts.push_back(Stmt::reg_next(
        reg, Expr::mux(ref_of("scan_en", 1), next, ref_of(reg, f.width))));
  }
  m.stmts.push_back(
      Stmt::connect("scan_out", bit0(ref_of("nail_sf_" + fields[0].name,
                                            fields[0].width))));
}

ModuleDef make_injector_module(const ResolvedAnn& ra) {
  const unsigned W = ra.width;
  const bool buffered = !ra.hasCond;  // no conditioner: buffer the enable here
  ModuleDef m;
  m.name = ra.injName;
  m.ports = {
      {"in", PortDir::Input, W, 0, 0},        {"scan_in", PortDir::Input, 1, 0, 0},
      {"scan_en", PortDir::Input, 1, 0, 0},   {"en", PortDir::Input, 1, 0, 0},
      {"global_en", PortDir::Input, 1, 0, 0}, {"out", PortDir::Output, W, 0, 0},
      {"scan_out", PortDir::Output, 1, 0, 0},
  };
  auto fields = inject::injector_fields(ra.ann.kind, W);
  for (const auto& f : fields)
    m.decls.push_back(Decl::reg("nail_sf_" + f.name, f.width, 0));
  if (buffered) {
    m.decls.push_back(Decl::reg("nail_en_buf", 1, 0));
    m.stmts.push_back(Stmt::reg_next("nail_en_buf", ref_of("en", 1)));
  }
  m.decls.push_back(Decl::wire("nail_sel", 1));
  m.stmts.push_back(Stmt::connect(
      "nail_sel", and2(ref_of(buffered ? "nail_en_buf" : "en", 1),
                       ref_of("nail_sf_isActive", 1))));

  auto in = [&] { return ref_of("in", W); };
  auto mask = [&] { return ref_of("nail_sf_mask", W); };
  switch (ra.ann.kind) {
    case InjectorKind::StuckAt: {
      ExprPtr forced = Expr::binary(
          nir::BinOp::Or, and2(ref_of("nail_sf_stuckValue", W), mask()),
          and2(in(), Expr::unary(nir::UnOp::Not, mask())));
      m.stmts.push_back(Stmt::connect(
          "out", Expr::mux(ref_of("nail_sel", 1), std::move(forced), in())));
      break;
    }
    case InjectorKind::LfsrFlip: {
      m.decls.push_back(Decl::reg("nail_lfsr", 32, 0));
      m.decls.push_back(Decl::wire("nail_lfsr_next", 32));
      m.decls.push_back(Decl::wire("nail_flip", 1));
      auto s = [&] { return ref_of("nail_lfsr", 32); };
      // Fibonacci taps 32, 22, 2, 1: tap t reads bit 32-t.
      ExprPtr fb = Expr::binary(
          nir::BinOp::Xor,
          Expr::binary(nir::BinOp::Xor, Expr::bits(s(), 0, 0), Expr::bits(s(), 10, 10)),
          Expr::binary(nir::BinOp::Xor, Expr::bits(s(), 30, 30), Expr::bits(s(), 31, 31)));
      m.stmts.push_back(Stmt::connect(
          "nail_lfsr_next",
          Expr::binary(nir::BinOp::Cat, std::move(fb), Expr::bits(s(), 31, 1))));
      m.stmts.push_back(Stmt::reg_next(
          "nail_lfsr", Expr::mux(ref_of("nail_sel", 1), ref_of("nail_lfsr_next", 32),
                                 ref_of("nail_sf_seed", 32))));
      m.stmts.push_back(Stmt::connect(
          "nail_flip", Expr::binary(nir::BinOp::Lt, ref_of("nail_lfsr_next", 32),
                                    ref_of("nail_sf_threshold", 32))));
      m.stmts.push_back(Stmt::connect(
          "out", Expr::mux(and2(ref_of("nail_sel", 1), ref_of("nail_flip", 1)),
                           Expr::binary(nir::BinOp::Xor, in(), mask()), in())));
      break;
    }
    case InjectorKind::CycleWindow: {
      m.decls.push_back(Decl::reg("nail_cycle", 32, 0));
      m.decls.push_back(Decl::reg("nail_ge_prev", 1, 0));
      m.decls.push_back(Decl::wire("nail_rising", 1));
      m.decls.push_back(Decl::wire("nail_inwin", 1));
      m.stmts.push_back(Stmt::connect(
          "nail_rising", and2(ref_of("global_en", 1),
                              Expr::unary(nir::UnOp::Not, ref_of("nail_ge_prev", 1)))));
      m.stmts.push_back(Stmt::reg_next("nail_ge_prev", ref_of("global_en", 1)));
      m.stmts.push_back(Stmt::reg_next(
          "nail_cycle",
          Expr::mux(ref_of("nail_rising", 1), Expr::literal(32, 0),
                    Expr::mux(ref_of("global_en", 1),
                              Expr::binary(nir::BinOp::Add, ref_of("nail_cycle", 32),
                                           Expr::literal(32, 1)),
                              ref_of("nail_cycle", 32)))));
      // counter >= start && counter - start < duration, wrap-safe
      ExprPtr geStart = Expr::unary(
          nir::UnOp::Not, Expr::binary(nir::BinOp::Lt, ref_of("nail_cycle", 32),
                                       ref_of("nail_sf_startCycle", 32)));
      ExprPtr inDur = Expr::binary(
          nir::BinOp::Lt,
          Expr::binary(nir::BinOp::Sub, ref_of("nail_cycle", 32),
                       ref_of("nail_sf_startCycle", 32)),
          ref_of("nail_sf_duration", 32));
      m.stmts.push_back(Stmt::connect(
          "nail_inwin", and2(std::move(geStart), std::move(inDur))));
      m.stmts.push_back(Stmt::connect(
          "out", Expr::mux(and2(ref_of("nail_sel", 1), ref_of("nail_inwin", 1)),
                           Expr::binary(nir::BinOp::Xor, in(), mask()), in())));
      break;
    }
  }
  add_scan_shift(m, fields);
  return m;
}

std::string sink_port_name(std::size_t i, const std::string& sourcePath) {
  return "nail_sink_" + std::to_string(i) + "_" + sanitize_path(sourcePath);
}

ExprPtr cond_to_expr(const cond::CondPtr& e,
                     const std::map<std::string, std::string>& signalPort) {
  switch (e->kind) {
    case cond::CondExpr::Kind::ScanField:
      return ref_of("nail_sf_" + e->name, e->width);
    case cond::CondExpr::Kind::Signal:
      return ref_of(signalPort.at(e->name), e->width);
    case cond::CondExpr::Kind::Literal:
      return Expr::literal(e->width, e->value);
    case cond::CondExpr::Kind::Compare: {
      ExprPtr a = cond_to_expr(e->args[0], signalPort);
      ExprPtr b = cond_to_expr(e->args[1], signalPort);
      switch (e->cmp) {
        case cond::CondExpr::Cmp::Eq: return Expr::binary(nir::BinOp::Eq, a, b);
        case cond::CondExpr::Cmp::Ne: return Expr::binary(nir::BinOp::Neq, a, b);
        case cond::CondExpr::Cmp::Lt: return Expr::binary(nir::BinOp::Lt, a, b);
        case cond::CondExpr::Cmp::Gt: return Expr::binary(nir::BinOp::Gt, a, b);
      }
      break;
    }
    case cond::CondExpr::Kind::Bool: {
      ExprPtr a = cond_to_expr(e->args[0], signalPort);
      switch (e->bop) {
        case cond::CondExpr::BoolOp::Not: return Expr::unary(nir::UnOp::Not, a);
        case cond::CondExpr::BoolOp::And:
          return Expr::binary(nir::BinOp::And, a, cond_to_expr(e->args[1], signalPort));
        case cond::CondExpr::BoolOp::Or:
          return Expr::binary(nir::BinOp::Or, a, cond_to_expr(e->args[1], signalPort));
      }
      break;
    }
  }
  fail(ErrKind::Internal, "unknown condition node");
}

std::vector<inject::FieldSpec> conditioner_fields(const cond::ParsedCondition& parsed) {
  std::vector<inject::FieldSpec> fields{{"isActive", 1}};
  for (const auto& f : parsed.fields) fields.push_back({f.name, f.width});
  return fields;
}

ModuleDef make_conditioner_module(const ResolvedAnn& ra) {
  ModuleDef m;
  m.name = ra.condName;
  m.ports = {
      {"scan_in", PortDir::Input, 1, 0, 0},
      {"scan_en", PortDir::Input, 1, 0, 0},
      {"global_en", PortDir::Input, 1, 0, 0},
  };
  std::map<std::string, std::string> signalPort;
  for (std::size_t i = 0; i < ra.parsed.signals.size(); ++i) {
    const auto& s = ra.parsed.signals[i];
    const std::string port = sink_port_name(i, s.path);
    signalPort[s.path] = port;
    m.ports.push_back({port, PortDir::Input, s.width, 0, 0});
  }
  m.ports.push_back({"cond_en", PortDir::Output, 1, 0, 0});
  m.ports.push_back({"scan_out", PortDir::Output, 1, 0, 0});

  auto fields = conditioner_fields(ra.parsed);
  for (const auto& f : fields)
    m.decls.push_back(Decl::reg("nail_sf_" + f.name, f.width, 0));
  m.decls.push_back(Decl::reg("nail_en_buf", 1, 0));
  m.decls.push_back(Decl::wire("nail_cond_val", 1));

  m.stmts.push_back(Stmt::connect("nail_cond_val", cond_to_expr(ra.parsed.expr, signalPort)));
  m.stmts.push_back(Stmt::reg_next(
      "nail_en_buf", and2(ref_of("global_en", 1),
                          and2(ref_of("nail_sf_isActive", 1), ref_of("nail_cond_val", 1)))));
  m.stmts.push_back(Stmt::connect("cond_en", ref_of("nail_en_buf", 1)));
  add_scan_shift(m, fields);
  return m;
}

void check_fresh_module(const Circuit& c, const std::string& name) {
  if (c.find_module(name) != nullptr)
    fail(ErrKind::Validate, "fresh module name '" + name + "' collides with an existing module");
}

void check_fresh_name(const ModuleDef& m, const std::string& name) {
  if (m.has_name(name))
    fail(ErrKind::Validate, "fresh name '" + name + "' collides with an existing name in module '" +
                                m.name + "'");
}

// --- value routing through the hierarchy ------------------------------------

struct Loc {
  std::string module;
  std::string ref;
};

// Connects `from` (a readable value in its module) to `to` (a connectable
// sink in its module), punching nail_ln_<chain>_<n> ports through the
// hierarchy as needed. Both modules must be singletons.
void route_value(Circuit& c, const Hier& h, const std::string& chainId,
                 unsigned& linkCounter, const Loc& from, const Loc& to, unsigned width) {
  auto fresh_link = [&] {
    return "nail_ln_" + chainId + "_" + std::to_string(linkCounter++);
  };
  Loc cur = from;
  const auto& toChain = h.chainTo.at(to.module);
  // Ascend until cur's module is an ancestor of (or equal to) to.module.
  auto is_prefix = [&](const std::vector<HierStep>& a, const std::vector<HierStep>& b) {
    if (a.size() > b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].instName != b[i].instName || a[i].moduleName != b[i].moduleName) return false;
    return true;
  };
  while (!is_prefix(h.chainTo.at(cur.module), toChain)) {
    ModuleDef* m = c.find_module(cur.module);
    const std::string port = fresh_link();
    check_fresh_name(*m, port);
    m->ports.push_back({port, PortDir::Output, width, 0, 0});
    m->stmts.push_back(Stmt::connect(port, ref_of(cur.ref, width)));
    const auto& up = h.parentOf.at(cur.module);
    cur = Loc{up.moduleName, up.instName + "." + port};
  }
  // Descend along to.module's chain.
  while (cur.module != to.module) {
    const auto& step = toChain[h.depth(cur.module)];
    ModuleDef* child = c.find_module(step.moduleName);
    const std::string port = fresh_link();
    check_fresh_name(*child, port);
    child->ports.push_back({port, PortDir::Input, width, 0, 0});
    ModuleDef* m = c.find_module(cur.module);
    m->stmts.push_back(Stmt::connect(step.instName + "." + port, ref_of(cur.ref, width)));
    cur = Loc{step.moduleName, port};
  }
  ModuleDef* m = c.find_module(to.module);
  m->stmts.push_back(Stmt::connect(to.ref, ref_of(cur.ref, width)));
}

// Makes the 1-bit top-level value `topPort` readable inside `module` as a
// broadcast, punching `punchName` input ports down the hierarchy with
// per-module caching. Returns the local ref.
std::string broadcast_into(Circuit& c, const Hier& h, const std::string& module,
                           const std::string& topPort, const std::string& punchName,
                           std::map<std::string, std::string>& cache) {
  if (module == c.top) return topPort;
  auto it = cache.find(module);
  if (it != cache.end()) return it->second;
  const auto& up = h.parentOf.at(module);
  const std::string parentRef =
      broadcast_into(c, h, up.moduleName, topPort, punchName, cache);
  ModuleDef* m = c.find_module(module);
  check_fresh_name(*m, punchName);
  m->ports.push_back({punchName, PortDir::Input, 1, 0, 0});
  ModuleDef* parent = c.find_module(up.moduleName);
  parent->stmts.push_back(
      Stmt::connect(up.instName + "." + punchName, ref_of(parentRef, 1)));
  cache[module] = punchName;
  return punchName;
}

std::vector<std::string> chain_order(const std::vector<ResolvedAnn>& ras) {
  std::vector<std::string> order;
  for (const auto& ra : ras)
    if (std::find(order.begin(), order.end(), ra.ann.chainId) == order.end())
      order.push_back(ra.ann.chainId);
  return order;
}

void ensure_validated_input(const Circuit& c) {
  auto diags = nir::validate_circuit(c);
  if (!diags.empty())
    fail(ErrKind::Validate, "input circuit does not validate: " + diags.front().str());
}

}  // namespace

// --- passes ------------------------------------------------------------------

std::pair<Circuit, std::vector<WiringEndpoint>> pass_condition(
    const Circuit& c, const std::vector<FaultAnnotation>& anns) {
  Hier h = build_hier(c);
  auto ras = resolve_annotations(c, h, anns);
  Circuit out = c;
  std::vector<WiringEndpoint> endpoints;
  for (const auto& ra : ras) {
    if (!ra.hasCond) continue;
    check_fresh_module(out, ra.condName);
    ModuleDef* host = out.find_module(ra.hostModule);
    check_fresh_name(*host, ra.condName);
    out.modules.push_back(make_conditioner_module(ra));
    host = out.find_module(ra.hostModule);  // vector may have reallocated
    host->decls.push_back(Decl::instance(ra.condName, ra.condName));
    for (std::size_t i = 0; i < ra.parsed.signals.size(); ++i) {
      const auto& s = ra.parsed.signals[i];
      WiringEndpoint ep;
      ep.hostModule = ra.hostModule;
      ep.sinkInstance = ra.condName;
      ep.sinkPort = sink_port_name(i, s.path);
      ep.sourcePath = s.path;
      ep.scopeLevel = s.scopeLevel;
      ep.width = s.width;
      endpoints.push_back(std::move(ep));
    }
  }
  return {std::move(out), std::move(endpoints)};
}

Circuit pass_inject(const Circuit& c, const std::vector<FaultAnnotation>& anns) {
  Hier h = build_hier(c);
  auto ras = resolve_annotations(c, h, anns);
  Circuit out = c;
  for (const auto& ra : ras) {
    check_fresh_module(out, ra.injName);
    out.modules.push_back(make_injector_module(ra));
    ModuleDef* host = out.find_module(ra.hostModule);
    check_fresh_name(*host, ra.injName);
    host->decls.push_back(Decl::instance(ra.injName, ra.injName));

    // Reroute the unique driver of the target through the injector.
    const unsigned W = ra.width;
    std::size_t found = host->stmts.size();
    for (std::size_t i = 0; i < host->stmts.size(); ++i) {
      const Stmt& s = host->stmts[i];
      if ((s.kind == Stmt::Kind::Connect || s.kind == Stmt::Kind::RegNext ||
           s.kind == Stmt::Kind::MemRead) &&
          s.lhs == ra.targetRef) {
        found = i;
        break;
      }
    }
    if (found == host->stmts.size())
      fail(ErrKind::Validate, "annotation '" + ra.ann.target + "': target has no driver");
    Stmt& drv = host->stmts[found];
    std::vector<Stmt> inserted;
    if (drv.kind == Stmt::Kind::Connect) {
      ExprPtr rhs = drv.rhs;
      drv = Stmt::connect(ra.injName + ".in", rhs);
      inserted.push_back(Stmt::connect(ra.targetRef, ref_of(ra.injName + ".out", W)));
    } else if (drv.kind == Stmt::Kind::RegNext) {
      ExprPtr rhs = drv.rhs;
      drv = Stmt::connect(ra.injName + ".in", rhs);
      inserted.push_back(Stmt::reg_next(ra.targetRef, ref_of(ra.injName + ".out", W)));
    } else {
      // Memory read: interpose a fresh wire as the injector's input.
      const std::string mrd = "nail_mrd_" + ra.ann.chainId + "_" + ra.componentId;
      check_fresh_name(*host, mrd);
      host->decls.push_back(Decl::wire(mrd, W));
      ExprPtr addr = drv.addr;
      std::string mem = drv.mem;
      drv = Stmt::mem_read(mrd, mem, addr);
      inserted.push_back(Stmt::connect(ra.injName + ".in", ref_of(mrd, W)));
      inserted.push_back(Stmt::connect(ra.targetRef, ref_of(ra.injName + ".out", W)));
    }
    host->stmts.insert(host->stmts.begin() + static_cast<std::ptrdiff_t>(found) + 1,
                       inserted.begin(), inserted.end());

    // Gate from the conditioner when it is already in place.
    if (ra.hasCond && host->find_decl(ra.condName) != nullptr)
      host->stmts.push_back(
          Stmt::connect(ra.injName + ".en", ref_of(ra.condName + ".cond_en", 1)));
  }
  return out;
}

Circuit pass_wiring(const Circuit& c, const std::vector<WiringEndpoint>& endpoints) {
  Circuit out = c;
  Hier h = build_hier(out);
  for (const auto& ep : endpoints) {
    ModuleDef* host = out.find_module(ep.hostModule);
    if (host == nullptr)
      fail(ErrKind::Internal, "wiring endpoint names unknown module '" + ep.hostModule + "'");
    if (ep.scopeLevel == 0) {
      host->stmts.push_back(Stmt::connect(ep.sinkInstance + "." + ep.sinkPort,
                                          ref_of(ep.sourcePath, ep.width)));
    } else if (ep.scopeLevel == 1) {
      auto pit = h.parentOf.find(ep.hostModule);
      if (pit == h.parentOf.end())
        fail(ErrKind::Internal, "parent-scope wiring for module without a parent");
      auto strip = [](const std::string& s, std::string_view prefix) {
        return s.size() > prefix.size() && s.compare(0, prefix.size(), prefix) == 0
                   ? s.substr(prefix.size())
                   : s;
      };
      const std::string link = "nail_src_" + strip(ep.sinkInstance, "nail_cond_") +
                               "_" + strip(ep.sinkPort, "nail_sink_");
      check_fresh_name(*host, link);
      host->ports.push_back({link, PortDir::Input, ep.width, 0, 0});
      host->stmts.push_back(
          Stmt::connect(ep.sinkInstance + "." + ep.sinkPort, ref_of(link, ep.width)));
      ModuleDef* parent = out.find_module(pit->second.moduleName);
      parent->stmts.push_back(Stmt::connect(pit->second.instName + "." + link,
                                            ref_of(ep.sourcePath, ep.width)));
    } else {
      fail(ErrKind::Validate,
           "condition source '" + ep.sourcePath +
               "' is more than one level above its conditioner; route it manually");
    }
  }
  return out;
}

std::pair<Circuit, std::vector<scan::ScanChainDescriptor>> pass_stitch(
    const Circuit& c, const std::vector<FaultAnnotation>& anns) {
  Circuit out = c;
  Hier h = build_hier(out);
  auto ras = resolve_annotations(out, h, anns);
  std::vector<scan::ScanChainDescriptor> descs;

  for (const auto& chainId : chain_order(ras)) {
    // Descriptor entry order: annotation order, conditioner before injector.
    // Physical order is the reverse: entry 0 ends up nearest scan_out.
    struct Comp {
      std::string entryId;
      std::string module;    // host module
      std::string instName;  // component instance
      bool isInjector;
      bool needsGlobalEn;    // wire en from the global broadcast
    };
    scan::ScanChainDescriptor d;
    d.chainId = chainId;
    std::vector<Comp> comps;
    for (const auto& ra : ras) {
      if (ra.ann.chainId != chainId) continue;
      if (ra.hasCond) {
        scan::ComponentEntry e;
        e.componentId = ra.componentId + "_cond";
        e.kind = scan::ComponentKind::Conditioner;
        for (const auto& f : conditioner_fields(ra.parsed))
          e.fields.push_back({f.name, f.width, 0});
        d.entries.push_back(std::move(e));
        comps.push_back({ra.componentId + "_cond", ra.hostModule, ra.condName, false, false});
      }
      scan::ComponentEntry e;
      e.componentId = ra.componentId + "_inj";
      switch (ra.ann.kind) {
        case InjectorKind::StuckAt: e.kind = scan::ComponentKind::StuckAt; break;
        case InjectorKind::LfsrFlip: e.kind = scan::ComponentKind::LfsrFlip; break;
        case InjectorKind::CycleWindow: e.kind = scan::ComponentKind::CycleWindow; break;
      }
      for (const auto& f : inject::injector_fields(ra.ann.kind, ra.width))
        e.fields.push_back({f.name, f.width, 0});
      d.entries.push_back(std::move(e));
      comps.push_back({ra.componentId + "_inj", ra.hostModule, ra.injName, true, !ra.hasCond});
    }
    scan::assign_offsets(d);

    ModuleDef* top = out.find_module(out.top);
    const std::string scanIn = "scan_in_" + chainId;
    const std::string scanEn = "scan_en_" + chainId;
    const std::string globalEn = "global_en_" + chainId;
    const std::string scanOut = "scan_out_" + chainId;
    for (const auto& p : {scanIn, scanEn, globalEn, scanOut}) check_fresh_name(*top, p);
    top->ports.push_back({scanIn, PortDir::Input, 1, 0, 0});
    top->ports.push_back({scanEn, PortDir::Input, 1, 0, 0});
    top->ports.push_back({globalEn, PortDir::Input, 1, 0, 0});
    top->ports.push_back({scanOut, PortDir::Output, 1, 0, 0});

    std::map<std::string, std::string> seCache, geCache;
    const std::string sePunch = "nail_se_" + chainId;
    const std::string gePunch = "nail_ge_" + chainId;
    for (const auto& comp : comps) {
      const std::string seRef =
          broadcast_into(out, h, comp.module, scanEn, sePunch, seCache);
      const std::string geRef =
          broadcast_into(out, h, comp.module, globalEn, gePunch, geCache);
      ModuleDef* m = out.find_module(comp.module);
      m->stmts.push_back(Stmt::connect(comp.instName + ".scan_en", ref_of(seRef, 1)));
      m->stmts.push_back(Stmt::connect(comp.instName + ".global_en", ref_of(geRef, 1)));
      if (comp.needsGlobalEn)
        m->stmts.push_back(Stmt::connect(comp.instName + ".en", ref_of(geRef, 1)));
    }

    // Serial path: scan_in -> last entry -> ... -> entry 0 -> scan_out.
    unsigned linkCounter = 0;
    Loc cur{out.top, scanIn};
    for (auto it = comps.rbegin(); it != comps.rend(); ++it) {
      route_value(out, h, chainId, linkCounter, cur,
                  Loc{it->module, it->instName + ".scan_in"}, 1);
      cur = Loc{it->module, it->instName + ".scan_out"};
    }
    route_value(out, h, chainId, linkCounter, cur, Loc{out.top, scanOut}, 1);

    descs.push_back(std::move(d));
  }
  return {std::move(out), std::move(descs)};
}

std::vector<ChainStats> chain_stats(const Circuit& c,
                                    const std::vector<FaultAnnotation>& anns) {
  Hier h = build_hier(c);
  auto ras = resolve_annotations(c, h, anns);
  std::vector<ChainStats> stats;
  for (const auto& chainId : chain_order(ras)) {
    ChainStats s;
    s.chainId = chainId;
    for (const auto& ra : ras) {
      if (ra.ann.chainId != chainId) continue;
      s.enableBuffers += 1;
      if (ra.hasCond)
        for (const auto& f : conditioner_fields(ra.parsed)) s.chainBits += f.width;
      for (const auto& f : inject::injector_fields(ra.ann.kind, ra.width))
        s.chainBits += f.width;
      if (ra.ann.kind == InjectorKind::LfsrFlip) s.auxStateBits += 32;
      if (ra.ann.kind == InjectorKind::CycleWindow) s.auxStateBits += 33;
    }
    s.totalAddedStateBits = s.chainBits + s.enableBuffers + s.auxStateBits;
    stats.push_back(std::move(s));
  }
  return stats;
}

InstrumentResult instrument(const Circuit& c, const std::vector<FaultAnnotation>& anns) {
  ensure_validated_input(c);
  InstrumentResult result;
  if (anns.empty()) {
    result.circuit = c;
    return result;
  }
  auto [c1, endpoints] = pass_condition(c, anns);
  Circuit c2 = pass_inject(c1, anns);
  Circuit c3 = pass_wiring(c2, endpoints);
  auto [c4, descs] = pass_stitch(c3, anns);
  auto post = nir::validate_circuit(c4);
  if (!post.empty())
    fail(ErrKind::Internal,
         "instrumented circuit failed revalidation: " + post.front().str());
  result.circuit = std::move(c4);
  result.descriptors = std::move(descs);
  result.stats = chain_stats(c, anns);
  return result;
}

}  // namespace nail::xform

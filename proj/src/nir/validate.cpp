// SPDX-License-Identifier: Apache-2.0
#include "nail/nir/validate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "nail/nir/flatten.hpp"
#include "resolve.hpp"

namespace nail::nir {

namespace {

using detail::ModuleScope;
using detail::SymInfo;

// Collects the Ref paths of an expression.
void collect_refs(const ExprPtr& e, std::vector<std::string>& out) {
  if (!e) return;
  if (e->kind == Expr::Kind::Ref) out.push_back(e->path);
  for (const auto& a : e->args) collect_refs(a, out);
}

void check_drivers(const Circuit& c, const ModuleDef& m,
                   const ModuleScope& scope, std::vector<Diagnostic>& diags) {
  // Targets a module may drive: own wires and output ports, own registers
  // (via next-value), instance input ports, and memory ports.
  std::map<std::string, int> driveCount;
  std::map<std::string, int> memReads, memWrites;

  auto note = [&](const std::string& name, int line, int col) {
    if (++driveCount[name] == 2)
      diags.push_back(Diagnostic{"E_MULTIDRIVE",
                                 "'" + name + "' is driven more than once in module " + m.name,
                                 line, col});
  };

  for (const auto& s : m.stmts) {
    switch (s.kind) {
      case Stmt::Kind::Connect: {
        auto segs = split_path(s.lhs);
        auto it = scope.syms.find(segs[0]);
        if (it == scope.syms.end()) break;  // resolution already reported
        if (segs.size() == 1) {
          switch (it->second.kind) {
            case SymInfo::Kind::Wire:
            case SymInfo::Kind::PortOut:
              note(s.lhs, s.line, s.col);
              break;
            case SymInfo::Kind::PortIn:
              diags.push_back(Diagnostic{"E_MULTIDRIVE",
                                         "input port '" + s.lhs + "' cannot be driven inside module " + m.name,
                                         s.line, s.col});
              break;
            default:
              break;  // reg handled by resolve; mem/inst already diagnosed
          }
        } else if (segs.size() == 2 && it->second.kind == SymInfo::Kind::Inst &&
                   it->second.instModule != nullptr) {
          const Port* p = it->second.instModule->find_port(segs[1]);
          if (p == nullptr) break;
          if (p->dir == PortDir::Output) {
            diags.push_back(Diagnostic{"E_MULTIDRIVE",
                                       "instance output '" + s.lhs + "' cannot be driven from module " + m.name,
                                       s.line, s.col});
          } else {
            note(s.lhs, s.line, s.col);
          }
        }
        break;
      }
      case Stmt::Kind::RegNext:
        note(s.lhs, s.line, s.col);
        break;
      case Stmt::Kind::MemRead: {
        note(s.lhs, s.line, s.col);
        if (++memReads[s.mem] == 2)
          diags.push_back(Diagnostic{"E_MULTIDRIVE",
                                     "memory '" + s.mem + "' has more than one read port",
                                     s.line, s.col});
        break;
      }
      case Stmt::Kind::MemWrite:
        if (++memWrites[s.lhs] == 2)
          diags.push_back(Diagnostic{"E_MULTIDRIVE",
                                     "memory '" + s.lhs + "' has more than one write port",
                                     s.line, s.col});
        break;
    }
  }

  // Everything drivable must be driven exactly once.
  for (const auto& p : m.ports) {
    if (p.dir == PortDir::Output && driveCount[p.name] == 0)
      diags.push_back(Diagnostic{"E_UNDRIVEN",
                                 "output port '" + p.name + "' of module " + m.name + " is never driven",
                                 p.line, p.col});
  }
  for (const auto& d : m.decls) {
    if (d.kind == Decl::Kind::Wire && driveCount[d.name] == 0)
      diags.push_back(Diagnostic{"E_UNDRIVEN",
                                 "wire '" + d.name + "' of module " + m.name + " is never driven",
                                 d.line, d.col});
    if (d.kind == Decl::Kind::Reg && driveCount[d.name] == 0)
      diags.push_back(Diagnostic{"E_UNDRIVEN",
                                 "register '" + d.name + "' of module " + m.name + " has no next-value statement",
                                 d.line, d.col});
    if (d.kind == Decl::Kind::Instance && d.moduleName != m.name) {
      const ModuleDef* child = c.find_module(d.moduleName);
      if (child == nullptr) continue;
      for (const auto& p : child->ports) {
        if (p.dir == PortDir::Input && driveCount[d.name + "." + p.name] == 0)
          diags.push_back(Diagnostic{"E_UNDRIVEN",
                                     "instance input '" + d.name + "." + p.name + "' in module " + m.name + " is never driven",
                                     d.line, d.col});
      }
    }
  }
}

// Combinational-loop search over the flattened subtree of `root`. A cycle is
// reported here only if root's own statements close it: it passes through a
// local signal, or through a direct child's input port (which only root may
// drive). Deeper cycles surface when their own module is checked.
void check_comb_loops(const Circuit& c, const ModuleDef& root,
                      std::vector<Diagnostic>& diags) {
  FlatDesign flat;
  try {
    flat = flatten(c, root.name);
  } catch (const Error&) {
    return;  // resolution errors were already reported
  }

  std::set<std::string> childInputs;
  for (const auto& d : root.decls) {
    if (d.kind != Decl::Kind::Instance) continue;
    const ModuleDef* child = c.find_module(d.moduleName);
    if (child == nullptr) continue;
    for (const auto& p : child->ports)
      if (p.dir == PortDir::Input) childInputs.insert(d.name + "." + p.name);
  }

  const std::size_t n = flat.signals.size();
  std::vector<std::vector<std::uint32_t>> deps(n);  // signal -> its inputs
  auto is_comb = [&](std::size_t idx) {
    auto k = flat.signals[idx].kind;
    return k == FlatSignal::Kind::Comb || k == FlatSignal::Kind::TopOutput;
  };
  for (const auto& s : flat.stmts) {
    if (s.kind != Stmt::Kind::Connect && s.kind != Stmt::Kind::MemRead) continue;
    auto lhsIt = flat.signalIndex.find(s.lhs);
    if (lhsIt == flat.signalIndex.end()) continue;
    std::vector<std::string> refs;
    collect_refs(s.kind == Stmt::Kind::Connect ? s.rhs : s.addr, refs);
    for (const auto& r : refs) {
      auto it = flat.signalIndex.find(r);
      if (it == flat.signalIndex.end()) continue;
      if (is_comb(it->second))
        deps[lhsIt->second].push_back(static_cast<std::uint32_t>(it->second));
    }
  }

  // Iterative DFS with colors; extracts one representative cycle.
  std::vector<int> color(n, 0);  // 0 white, 1 on stack, 2 done
  std::vector<std::uint32_t> stack, pos;
  for (std::size_t start = 0; start < n; ++start) {
    if (color[start] != 0 || !is_comb(start)) continue;
    stack = {static_cast<std::uint32_t>(start)};
    pos = {0};
    color[start] = 1;
    while (!stack.empty()) {
      std::uint32_t v = stack.back();
      if (pos.back() < deps[v].size()) {
        std::uint32_t next = deps[v][pos.back()++];
        if (color[next] == 1) {
          // Found a cycle; report if it passes through a local signal.
          std::vector<std::string> cycle;
          bool touchesLocal = false;
          auto onCycle = std::find(stack.begin(), stack.end(), next);
          for (auto it = onCycle; it != stack.end(); ++it) {
            const std::string& path = flat.signals[*it].path;
            cycle.push_back(path);
            if (path.find('.') == std::string::npos || childInputs.count(path))
              touchesLocal = true;
          }
          if (touchesLocal) {
            std::string msg = "combinational loop in module " + root.name + ": ";
            for (std::size_t i = 0; i < cycle.size(); ++i) {
              if (i) msg += " -> ";
              msg += cycle[i];
            }
            msg += " -> " + cycle.front();
            diags.push_back(Diagnostic{"E_COMBLOOP", msg, root.line, root.col});
            return;  // one report per module is enough
          }
          // Keep searching other branches.
        } else if (color[next] == 0) {
          color[next] = 1;
          stack.push_back(next);
          pos.push_back(0);
        }
      } else {
        color[v] = 2;
        stack.pop_back();
        pos.pop_back();
      }
    }
  }
}

// Detects recursive instantiation, which would make flattening diverge.
bool check_instance_graph(const Circuit& c, std::vector<Diagnostic>& diags) {
  std::map<std::string, int> color;
  bool ok = true;
  std::function<void(const ModuleDef&)> dfs = [&](const ModuleDef& m) {
    color[m.name] = 1;
    for (const auto& d : m.decls) {
      if (d.kind != Decl::Kind::Instance) continue;
      const ModuleDef* child = c.find_module(d.moduleName);
      if (child == nullptr) continue;
      int col = color[child->name];
      if (col == 1) {
        diags.push_back(Diagnostic{"E_UNRESOLVED",
                                   "recursive instantiation of module " + child->name,
                                   d.line, d.col});
        ok = false;
      } else if (col == 0) {
        dfs(*child);
      }
    }
    color[m.name] = 2;
  };
  for (const auto& m : c.modules)
    if (color[m.name] == 0) dfs(m);
  return ok;
}

}  // namespace

std::vector<Diagnostic> validate_circuit(const Circuit& c) {
  std::vector<Diagnostic> diags;

  Circuit& mutableC = const_cast<Circuit&>(c);  // check mode never mutates
  detail::resolve_circuit(mutableC, /*fill=*/false, /*stopAtFirst=*/false, diags);
  if (!diags.empty()) return diags;

  if (!check_instance_graph(c, diags)) return diags;

  for (const auto& m : c.modules) {
    std::vector<Diagnostic> scratch;
    ModuleScope scope = detail::build_scope(c, m, scratch);
    check_drivers(c, m, scope, diags);
  }
  if (!diags.empty()) return diags;

  for (const auto& m : c.modules) check_comb_loops(c, m, diags);
  return diags;
}

}  // namespace nail::nir

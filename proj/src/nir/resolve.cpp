// SPDX-License-Identifier: Apache-2.0
#include "resolve.hpp"

#include <sstream>

namespace nail::nir::detail {

namespace {

void diag(std::vector<Diagnostic>& out, const std::string& code,
          const std::string& msg, int line, int col) {
  out.push_back(Diagnostic{code, msg, line, col});
}

// Computes (and in fill mode assigns) the width of an expression.
// Returns 0 when an error was reported.
unsigned resolve_expr(Expr& e, const ModuleScope& scope, bool fill,
                      std::vector<Diagnostic>& diags) {
  auto report = [&](const std::string& code, const std::string& msg) -> unsigned {
    diag(diags, code, msg, e.line, e.col);
    return 0;
  };
  unsigned w = 0;
  switch (e.kind) {
    case Expr::Kind::Literal:
      if (e.width < 1 || e.width > kMaxWidth)
        return report("E_WIDTH", "literal width out of range");
      if (!fits(e.value, e.width))
        return report("E_WIDTH", "literal value " + std::to_string(e.value) +
                                     " does not fit width " +
                                     std::to_string(e.width));
      return e.width;
    case Expr::Kind::Ref:
      w = resolve_ref_width(scope, e.path, e.line, e.col, diags);
      if (w == 0) return 0;
      break;
    case Expr::Kind::Mux: {
      unsigned wc = resolve_expr(*e.args[0], scope, fill, diags);
      unsigned wa = resolve_expr(*e.args[1], scope, fill, diags);
      unsigned wb = resolve_expr(*e.args[2], scope, fill, diags);
      if (!wc || !wa || !wb) return 0;
      if (wc != 1) return report("E_WIDTH", "mux selector must have width 1");
      if (wa != wb) return report("E_WIDTH", "mux arms must have equal widths");
      w = wa;
      break;
    }
    case Expr::Kind::Unary:
      w = resolve_expr(*e.args[0], scope, fill, diags);
      if (!w) return 0;
      break;
    case Expr::Kind::Binary: {
      unsigned wa = resolve_expr(*e.args[0], scope, fill, diags);
      unsigned wb = resolve_expr(*e.args[1], scope, fill, diags);
      if (!wa || !wb) return 0;
      try {
        w = binary_result_width(e.bin, wa, wb);
      } catch (const Error& err) {
        return report("E_WIDTH", err.what());
      }
      break;
    }
    case Expr::Kind::Bits: {
      unsigned wa = resolve_expr(*e.args[0], scope, fill, diags);
      if (!wa) return 0;
      if (e.hi < e.lo) return report("E_WIDTH", "bits range is reversed");
      if (e.hi >= wa) return report("E_WIDTH", "bits range exceeds operand width");
      w = e.hi - e.lo + 1;
      break;
    }
  }
  if (fill) {
    e.width = w;
  } else if (e.width != w) {
    return report("E_WIDTH", "stored width " + std::to_string(e.width) +
                                 " disagrees with computed width " +
                                 std::to_string(w));
  }
  return w;
}

}  // namespace

ModuleScope build_scope(const Circuit& c, const ModuleDef& m,
                        std::vector<Diagnostic>& diags) {
  ModuleScope scope;
  scope.mod = &m;
  auto add = [&](const std::string& name, SymInfo info, int line, int col) {
    if (!scope.syms.emplace(name, info).second)
      diag(diags, "E_UNRESOLVED",
           "duplicate identifier '" + name + "' in module " + m.name, line, col);
  };
  for (const auto& p : m.ports) {
    SymInfo info;
    info.kind = p.dir == PortDir::Input ? SymInfo::Kind::PortIn : SymInfo::Kind::PortOut;
    info.width = p.width;
    add(p.name, info, p.line, p.col);
    if (p.width < 1 || p.width > kMaxWidth)
      diag(diags, "E_WIDTH", "port " + p.name + " width out of range", p.line, p.col);
  }
  for (const auto& d : m.decls) {
    SymInfo info;
    switch (d.kind) {
      case Decl::Kind::Wire:
        info.kind = SymInfo::Kind::Wire;
        info.width = d.width;
        break;
      case Decl::Kind::Reg:
        info.kind = SymInfo::Kind::Reg;
        info.width = d.width;
        break;
      case Decl::Kind::Mem:
        info.kind = SymInfo::Kind::Mem;
        info.width = d.width;
        info.depth = d.depth;
        break;
      case Decl::Kind::Instance:
        info.kind = SymInfo::Kind::Inst;
        info.instModule = c.find_module(d.moduleName);
        if (info.instModule == nullptr)
          diag(diags, "E_UNRESOLVED",
               "instance " + d.name + " refers to unknown module " + d.moduleName,
               d.line, d.col);
        break;
    }
    if (d.kind != Decl::Kind::Instance) {
      if (d.width < 1 || d.width > kMaxWidth)
        diag(diags, "E_WIDTH", "declaration " + d.name + " width out of range",
             d.line, d.col);
      if (d.kind == Decl::Kind::Reg && !fits(d.init, d.width))
        diag(diags, "E_WIDTH", "register " + d.name + " init value does not fit",
             d.line, d.col);
      if (d.kind == Decl::Kind::Mem && d.depth == 0)
        diag(diags, "E_WIDTH", "memory " + d.name + " must have depth >= 1",
             d.line, d.col);
    }
    add(d.name, info, d.line, d.col);
  }
  return scope;
}

unsigned resolve_ref_width(const ModuleScope& scope, const std::string& path,
                           int line, int col, std::vector<Diagnostic>& diags) {
  auto segments = split_path(path);
  auto it = scope.syms.find(segments[0]);
  if (it == scope.syms.end()) {
    diag(diags, "E_UNRESOLVED",
         "unresolved reference '" + path + "' in module " + scope.mod->name,
         line, col);
    return 0;
  }
  const SymInfo& info = it->second;
  if (segments.size() == 1) {
    if (info.kind == SymInfo::Kind::Mem) {
      diag(diags, "E_UNRESOLVED",
           "memory '" + path + "' cannot be referenced as a value", line, col);
      return 0;
    }
    if (info.kind == SymInfo::Kind::Inst) {
      diag(diags, "E_UNRESOLVED",
           "instance '" + path + "' cannot be referenced as a value", line, col);
      return 0;
    }
    return info.width;
  }
  if (segments.size() == 2) {
    if (info.kind != SymInfo::Kind::Inst) {
      diag(diags, "E_UNRESOLVED",
           "'" + segments[0] + "' is not an instance in module " + scope.mod->name,
           line, col);
      return 0;
    }
    if (info.instModule == nullptr) return 0;  // already reported
    const Port* p = info.instModule->find_port(segments[1]);
    if (p == nullptr) {
      diag(diags, "E_UNRESOLVED",
           "module " + info.instModule->name + " has no port '" + segments[1] + "'",
           line, col);
      return 0;
    }
    return p->width;
  }
  diag(diags, "E_UNRESOLVED",
       "reference '" + path + "' is too deep; only instance ports are visible",
       line, col);
  return 0;
}

void resolve_circuit(Circuit& c, bool fill, bool stopAtFirst,
                     std::vector<Diagnostic>& diags) {
  auto done = [&] { return stopAtFirst && !diags.empty(); };

  if (c.find_module(c.top) == nullptr)
    diag(diags, "E_UNRESOLVED", "top module '" + c.top + "' does not exist", 0, 0);
  if (done()) return;
  {
    std::map<std::string, int> counts;
    for (const auto& m : c.modules) {
      if (++counts[m.name] == 2)
        diag(diags, "E_UNRESOLVED", "duplicate module name '" + m.name + "'",
             m.line, m.col);
    }
  }
  if (done()) return;

  for (auto& m : c.modules) {
    ModuleScope scope = build_scope(c, m, diags);
    if (done()) return;
    for (auto& s : m.stmts) {
      switch (s.kind) {
        case Stmt::Kind::Connect:
        case Stmt::Kind::RegNext: {
          auto segs = split_path(s.lhs);
          auto it = scope.syms.find(segs[0]);
          if (it == scope.syms.end()) {
            diag(diags, "E_UNRESOLVED",
                 "unresolved connection target '" + s.lhs + "'", s.line, s.col);
            break;
          }
          unsigned lw = 0;
          if (segs.size() == 1 && it->second.kind == SymInfo::Kind::Reg) {
            if (fill) s.kind = Stmt::Kind::RegNext;
            if (s.kind != Stmt::Kind::RegNext) {
              diag(diags, "E_MULTIDRIVE",
                   "register '" + s.lhs + "' must be driven with a next-value statement",
                   s.line, s.col);
            }
            lw = it->second.width;
          } else {
            if (s.kind == Stmt::Kind::RegNext) {
              diag(diags, "E_UNRESOLVED",
                   "next-value target '" + s.lhs + "' is not a local register",
                   s.line, s.col);
              break;
            }
            lw = resolve_ref_width(scope, s.lhs, s.line, s.col, diags);
            if (lw == 0) break;
          }
          unsigned rw = resolve_expr(*s.rhs, scope, fill, diags);
          if (lw && rw && lw != rw)
            diag(diags, "E_WIDTH",
                 "connection width mismatch: '" + s.lhs + "' has width " +
                     std::to_string(lw) + " but the expression has width " +
                     std::to_string(rw),
                 s.line, s.col);
          break;
        }
        case Stmt::Kind::MemRead: {
          auto it = scope.syms.find(s.mem);
          if (it == scope.syms.end() || it->second.kind != SymInfo::Kind::Mem ||
              split_path(s.mem).size() != 1) {
            diag(diags, "E_UNRESOLVED", "'" + s.mem + "' is not a local memory",
                 s.line, s.col);
            break;
          }
          unsigned lw = resolve_ref_width(scope, s.lhs, s.line, s.col, diags);
          resolve_expr(*s.addr, scope, fill, diags);
          if (lw && lw != it->second.width)
            diag(diags, "E_WIDTH",
                 "read destination '" + s.lhs + "' width " + std::to_string(lw) +
                     " does not match memory width " +
                     std::to_string(it->second.width),
                 s.line, s.col);
          break;
        }
        case Stmt::Kind::MemWrite: {
          auto it = scope.syms.find(s.lhs);
          if (it == scope.syms.end() || it->second.kind != SymInfo::Kind::Mem ||
              split_path(s.lhs).size() != 1) {
            diag(diags, "E_UNRESOLVED", "'" + s.lhs + "' is not a local memory",
                 s.line, s.col);
            break;
          }
          resolve_expr(*s.addr, scope, fill, diags);
          unsigned dw = resolve_expr(*s.rhs, scope, fill, diags);
          unsigned ew = resolve_expr(*s.en, scope, fill, diags);
          if (dw && dw != it->second.width)
            diag(diags, "E_WIDTH",
                 "write data width " + std::to_string(dw) +
                     " does not match memory width " +
                     std::to_string(it->second.width),
                 s.line, s.col);
          if (ew && ew != 1)
            diag(diags, "E_WIDTH", "write enable must have width 1", s.line, s.col);
          break;
        }
      }
      if (done()) return;
    }
  }
}

}  // namespace nail::nir::detail

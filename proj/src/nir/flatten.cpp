// SPDX-License-Identifier: Apache-2.0
#include "nail/nir/flatten.hpp"

#include <functional>

namespace nail::nir {

namespace {

ExprPtr prefix_expr(const ExprPtr& e, const std::string& prefix) {
  auto out = std::make_shared<Expr>(*e);
  if (out->kind == Expr::Kind::Ref && !prefix.empty())
    out->path = prefix + out->path;
  for (auto& a : out->args) a = prefix_expr(a, prefix);
  return out;
}

}  // namespace

std::size_t FlatDesign::signal(const std::string& path) const {
  auto it = signalIndex.find(path);
  if (it == signalIndex.end())
    fail(ErrKind::Validate, "unknown signal '" + path + "'");
  return it->second;
}

std::vector<std::string> instance_paths(const Circuit& c,
                                        const std::string& moduleName) {
  std::vector<std::string> out;
  std::function<void(const ModuleDef&, const std::string&)> walk =
      [&](const ModuleDef& m, const std::string& prefix) {
        if (m.name == moduleName) out.push_back(prefix);
        for (const auto& d : m.decls) {
          if (d.kind != Decl::Kind::Instance) continue;
          const ModuleDef* child = c.find_module(d.moduleName);
          if (child == nullptr)
            fail(ErrKind::Validate, "unknown module '" + d.moduleName + "'");
          walk(*child, prefix.empty() ? d.name : prefix + "." + d.name);
        }
      };
  const ModuleDef* top = c.find_module(c.top);
  if (top == nullptr) fail(ErrKind::Validate, "top module missing");
  walk(*top, "");
  return out;
}

FlatDesign flatten(const Circuit& c, const std::string& topName) {
  FlatDesign out;
  auto add_signal = [&](FlatSignal s) {
    out.signalIndex.emplace(s.path, out.signals.size());
    out.signals.push_back(std::move(s));
  };

  std::function<void(const ModuleDef&, const std::string&, int)> walk =
      [&](const ModuleDef& m, const std::string& prefix, int depth) {
        if (depth > 64)
          fail(ErrKind::Validate,
               "instance nesting exceeds 64 levels (recursive instantiation?)");
        const bool isTop = prefix.empty();
        for (const auto& p : m.ports) {
          FlatSignal s;
          s.path = prefix + p.name;
          s.width = p.width;
          if (isTop)
            s.kind = p.dir == PortDir::Input ? FlatSignal::Kind::TopInput
                                             : FlatSignal::Kind::TopOutput;
          else
            s.kind = FlatSignal::Kind::Comb;
          add_signal(std::move(s));
        }
        for (const auto& d : m.decls) {
          switch (d.kind) {
            case Decl::Kind::Wire: {
              FlatSignal s;
              s.path = prefix + d.name;
              s.width = d.width;
              s.kind = FlatSignal::Kind::Comb;
              add_signal(std::move(s));
              break;
            }
            case Decl::Kind::Reg: {
              FlatSignal s;
              s.path = prefix + d.name;
              s.width = d.width;
              s.kind = FlatSignal::Kind::Reg;
              s.init = d.init;
              add_signal(std::move(s));
              break;
            }
            case Decl::Kind::Mem: {
              FlatMem mem;
              mem.path = prefix + d.name;
              mem.width = d.width;
              mem.depth = d.depth;
              out.memIndex.emplace(mem.path, out.mems.size());
              out.mems.push_back(std::move(mem));
              break;
            }
            case Decl::Kind::Instance:
              break;
          }
        }
        // Children after the module's own names so parent connects can refer
        // to child ports; order within the signal table is not significant.
        for (const auto& d : m.decls) {
          if (d.kind != Decl::Kind::Instance) continue;
          const ModuleDef* child = c.find_module(d.moduleName);
          if (child == nullptr)
            fail(ErrKind::Validate, "unknown module '" + d.moduleName + "'");
          walk(*child, prefix + d.name + ".", depth + 1);
        }
        for (const auto& st : m.stmts) {
          Stmt flat = st;
          flat.lhs = prefix + st.lhs;
          if (!st.mem.empty()) flat.mem = prefix + st.mem;
          if (st.rhs) flat.rhs = prefix_expr(st.rhs, prefix);
          if (st.addr) flat.addr = prefix_expr(st.addr, prefix);
          if (st.en) flat.en = prefix_expr(st.en, prefix);
          out.stmts.push_back(std::move(flat));
        }
      };

  const ModuleDef* top = c.find_module(topName);
  if (top == nullptr)
    fail(ErrKind::Validate, "module '" + topName + "' does not exist");
  walk(*top, "", 0);
  return out;
}

}  // namespace nail::nir

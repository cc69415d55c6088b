// SPDX-License-Identifier: Apache-2.0
#include "nail/nir/ast.hpp"

#include <algorithm>

namespace nail::nir {

const char* bin_op_name(BinOp op) {
  switch (op) {
    case BinOp::And: return "and";
    case BinOp::Or: return "or";
    case BinOp::Xor: return "xor";
    case BinOp::Add: return "add";
    case BinOp::Sub: return "sub";
    case BinOp::Eq: return "eq";
    case BinOp::Neq: return "neq";
    case BinOp::Lt: return "lt";
    case BinOp::Gt: return "gt";
    case BinOp::Shl: return "shl";
    case BinOp::Shr: return "shr";
    case BinOp::Cat: return "cat";
  }
  return "?";
}

static void require(bool ok, const std::string& msg) {
  if (!ok) fail(ErrKind::Validate, msg);
}

ExprPtr Expr::literal(unsigned width, Value value) {
  require(width >= 1 && width <= kMaxWidth, "literal width out of range");
  require(fits(value, width), "literal value does not fit its width");
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Literal;
  e->width = width;
  e->value = value;
  return e;
}

ExprPtr Expr::ref(std::string path, unsigned width) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Ref;
  e->width = width;
  e->path = std::move(path);
  return e;
}

ExprPtr Expr::mux(ExprPtr cond, ExprPtr then_e, ExprPtr else_e) {
  require(cond && then_e && else_e, "mux operand missing");
  require(cond->width == 1, "mux selector must have width 1");
  require(then_e->width == else_e->width, "mux arms must have equal widths");
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Mux;
  e->width = then_e->width;
  e->args = {std::move(cond), std::move(then_e), std::move(else_e)};
  return e;
}

ExprPtr Expr::unary(UnOp op, ExprPtr a) {
  require(a != nullptr, "unary operand missing");
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Unary;
  e->un = op;
  e->width = a->width;
  e->args = {std::move(a)};
  return e;
}

unsigned binary_result_width(BinOp op, unsigned wa, unsigned wb) {
  switch (op) {
    case BinOp::And:
    case BinOp::Or:
    case BinOp::Xor:
      require(wa == wb, std::string(bin_op_name(op)) + " operands must have equal widths");
      return wa;
    case BinOp::Add:
    case BinOp::Sub:
      return std::max(wa, wb);
    case BinOp::Eq:
    case BinOp::Neq:
    case BinOp::Lt:
    case BinOp::Gt:
      require(wa == wb, std::string(bin_op_name(op)) + " operands must have equal widths");
      return 1;
    case BinOp::Shl:
    case BinOp::Shr:
      return wa;
    case BinOp::Cat: {
      unsigned w = wa + wb;
      require(w <= kMaxWidth, "cat result exceeds the 64-bit width limit");
      return w;
    }
  }
  fail(ErrKind::Internal, "unknown binary op");
}

ExprPtr Expr::binary(BinOp op, ExprPtr a, ExprPtr b) {
  require(a && b, "binary operand missing");
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Binary;
  e->bin = op;
  e->width = binary_result_width(op, a->width, b->width);
  e->args = {std::move(a), std::move(b)};
  return e;
}

ExprPtr Expr::bits(ExprPtr a, unsigned hi, unsigned lo) {
  require(a != nullptr, "bits operand missing");
  require(hi >= lo, "bits range is reversed");
  require(hi < a->width, "bits range exceeds operand width");
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Bits;
  e->width = hi - lo + 1;
  e->hi = hi;
  e->lo = lo;
  e->args = {std::move(a)};
  return e;
}

Decl Decl::wire(std::string name, unsigned width) {
  Decl d;
  d.kind = Kind::Wire;
  d.name = std::move(name);
  d.width = width;
  return d;
}

Decl Decl::reg(std::string name, unsigned width, Value init) {
  Decl d;
  d.kind = Kind::Reg;
  d.name = std::move(name);
  d.width = width;
  d.init = init;
  return d;
}

Decl Decl::mem(std::string name, unsigned width, std::uint64_t depth) {
  Decl d;
  d.kind = Kind::Mem;
  d.name = std::move(name);
  d.width = width;
  d.depth = depth;
  return d;
}

Decl Decl::instance(std::string name, std::string moduleName) {
  Decl d;
  d.kind = Kind::Instance;
  d.name = std::move(name);
  d.moduleName = std::move(moduleName);
  return d;
}

Stmt Stmt::connect(std::string lhs, ExprPtr rhs) {
  Stmt s;
  s.kind = Kind::Connect;
  s.lhs = std::move(lhs);
  s.rhs = std::move(rhs);
  return s;
}

Stmt Stmt::reg_next(std::string reg, ExprPtr rhs) {
  Stmt s;
  s.kind = Kind::RegNext;
  s.lhs = std::move(reg);
  s.rhs = std::move(rhs);
  return s;
}

Stmt Stmt::mem_read(std::string dst, std::string mem, ExprPtr addr) {
  Stmt s;
  s.kind = Kind::MemRead;
  s.lhs = std::move(dst);
  s.mem = std::move(mem);
  s.addr = std::move(addr);
  return s;
}

Stmt Stmt::mem_write(std::string mem, ExprPtr addr, ExprPtr data, ExprPtr en) {
  Stmt s;
  s.kind = Kind::MemWrite;
  s.lhs = std::move(mem);
  s.addr = std::move(addr);
  s.rhs = std::move(data);
  s.en = std::move(en);
  return s;
}

const Port* ModuleDef::find_port(const std::string& n) const {
  for (const auto& p : ports)
    if (p.name == n) return &p;
  return nullptr;
}

const Decl* ModuleDef::find_decl(const std::string& n) const {
  for (const auto& d : decls)
    if (d.name == n) return &d;
  return nullptr;
}

bool ModuleDef::has_name(const std::string& n) const {
  return find_port(n) != nullptr || find_decl(n) != nullptr;
}

const ModuleDef* Circuit::find_module(const std::string& n) const {
  for (const auto& m : modules)
    if (m.name == n) return &m;
  return nullptr;
}

ModuleDef* Circuit::find_module(const std::string& n) {
  for (auto& m : modules)
    if (m.name == n) return &m;
  return nullptr;
}

bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.width != b.width) return false;
  switch (a.kind) {
    case Expr::Kind::Literal:
      if (a.value != b.value) return false;
      break;
    case Expr::Kind::Ref:
      if (a.path != b.path) return false;
      break;
    case Expr::Kind::Unary:
      if (a.un != b.un) return false;
      break;
    case Expr::Kind::Binary:
      if (a.bin != b.bin) return false;
      break;
    case Expr::Kind::Bits:
      if (a.hi != b.hi || a.lo != b.lo) return false;
      break;
    case Expr::Kind::Mux:
      break;
  }
  if (a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!equal(a.args[i], b.args[i])) return false;
  return true;
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  return equal(*a, *b);
}

bool equal(const Port& a, const Port& b) {
  return a.name == b.name && a.dir == b.dir && a.width == b.width;
}

bool equal(const Decl& a, const Decl& b) {
  return a.kind == b.kind && a.name == b.name && a.width == b.width &&
         a.init == b.init && a.depth == b.depth && a.moduleName == b.moduleName;
}

bool equal(const Stmt& a, const Stmt& b) {
  return a.kind == b.kind && a.lhs == b.lhs && a.mem == b.mem &&
         equal(a.rhs, b.rhs) && equal(a.addr, b.addr) && equal(a.en, b.en);
}

bool equal(const ModuleDef& a, const ModuleDef& b) {
  if (a.name != b.name || a.ports.size() != b.ports.size() ||
      a.decls.size() != b.decls.size() || a.stmts.size() != b.stmts.size())
    return false;
  for (std::size_t i = 0; i < a.ports.size(); ++i)
    if (!equal(a.ports[i], b.ports[i])) return false;
  for (std::size_t i = 0; i < a.decls.size(); ++i)
    if (!equal(a.decls[i], b.decls[i])) return false;
  for (std::size_t i = 0; i < a.stmts.size(); ++i)
    if (!equal(a.stmts[i], b.stmts[i])) return false;
  return true;
}

bool equal(const Circuit& a, const Circuit& b) {
  if (a.name != b.name || a.top != b.top || a.modules.size() != b.modules.size())
    return false;
  for (std::size_t i = 0; i < a.modules.size(); ++i)
    if (!equal(a.modules[i], b.modules[i])) return false;
  return true;
}

}  // namespace nail::nir

// SPDX-License-Identifier: Apache-2.0
#include "nail/sim/model.hpp"

#include <deque>

namespace nail::sim {

namespace {

using nir::Expr;
using nir::FlatDesign;
using nir::FlatSignal;
using nir::Stmt;

void emit(const FlatDesign& fd, const nir::ExprPtr& e, std::vector<Instr>& code) {
  switch (e->kind) {
    case Expr::Kind::Literal:
      code.push_back({Op::Const, e->width, e->value, -1, 0, 0});
      return;
    case Expr::Kind::Ref: {
      auto idx = static_cast<int>(fd.signal(e->path));
      code.push_back({Op::Sig, e->width, 0, idx, 0, 0});
      return;
    }
    case Expr::Kind::Mux:
      emit(fd, e->args[0], code);
      emit(fd, e->args[1], code);
      emit(fd, e->args[2], code);
      code.push_back({Op::Mux, e->width, 0, -1, 0, 0});
      return;
    case Expr::Kind::Unary:
      emit(fd, e->args[0], code);
      code.push_back({Op::Not, e->width, 0, -1, 0, 0});
      return;
    case Expr::Kind::Bits:
      emit(fd, e->args[0], code);
      code.push_back({Op::Bits, e->width, 0, -1, e->hi, e->lo});
      return;
    case Expr::Kind::Binary: {
      emit(fd, e->args[0], code);
      emit(fd, e->args[1], code);
      Op op = Op::And;
      switch (e->bin) {
        case nir::BinOp::And: op = Op::And; break;
        case nir::BinOp::Or: op = Op::Or; break;
        case nir::BinOp::Xor: op = Op::Xor; break;
        case nir::BinOp::Add: op = Op::Add; break;
        case nir::BinOp::Sub: op = Op::Sub; break;
        case nir::BinOp::Eq: op = Op::Eq; break;
        case nir::BinOp::Neq: op = Op::Neq; break;
        case nir::BinOp::Lt: op = Op::Lt; break;
        case nir::BinOp::Gt: op = Op::Gt; break;
        case nir::BinOp::Shl: op = Op::Shl; break;
        case nir::BinOp::Shr: op = Op::Shr; break;
        case nir::BinOp::Cat: op = Op::Cat; break;
      }
      unsigned b = e->bin == nir::BinOp::Cat ? e->args[1]->width : 0;
      code.push_back({op, e->width, 0, -1, 0, b});
      return;
    }
  }
  fail(ErrKind::Internal, "unknown expression kind");
}

}  // namespace

Program compile_expr(const FlatDesign& fd, const nir::ExprPtr& e) {
  Program p;
  p.width = e->width;
  emit(fd, e, p.code);
  return p;
}

Value eval_program(const Program& p, const std::vector<Value>& vals,
                   std::vector<Value>& stack) {
  stack.clear();
  for (const Instr& in : p.code) {
    switch (in.op) {
      case Op::Const:
        stack.push_back(in.imm);
        break;
      case Op::Sig:
        stack.push_back(vals[static_cast<std::size_t>(in.sig)]);
        break;
      case Op::Not:
        stack.back() = ~stack.back() & mask_of(in.width);
        break;
      case Op::Bits:
        stack.back() = (stack.back() >> in.b) & mask_of(in.a - in.b + 1);
        break;
      case Op::Mux: {
        Value e = stack.back(); stack.pop_back();
        Value t = stack.back(); stack.pop_back();
        Value c = stack.back(); stack.pop_back();
        stack.push_back(c ? t : e);
        break;
      }
      default: {
        Value b = stack.back(); stack.pop_back();
        Value a = stack.back();
        Value r = 0;
        switch (in.op) {
          case Op::And: r = a & b; break;
          case Op::Or: r = a | b; break;
          case Op::Xor: r = a ^ b; break;
          case Op::Add: r = (a + b) & mask_of(in.width); break;
          case Op::Sub: r = (a - b) & mask_of(in.width); break;
          case Op::Eq: r = a == b; break;
          case Op::Neq: r = a != b; break;
          case Op::Lt: r = a < b; break;
          case Op::Gt: r = a > b; break;
          case Op::Shl: r = b >= 64 ? 0 : (a << b) & mask_of(in.width); break;
          case Op::Shr: r = b >= 64 ? 0 : a >> b; break;
          case Op::Cat: r = (a << in.b) | b; break;
          default: fail(ErrKind::Internal, "bad opcode");
        }
        stack.back() = r;
        break;
      }
    }
  }
  if (stack.size() != 1) fail(ErrKind::Internal, "unbalanced program");
  return stack.back();
}

SimProgram compile(const FlatDesign& fd) {
  SimProgram sp;
  std::vector<CombTask> combUnsorted;
  for (const Stmt& s : fd.stmts) {
    switch (s.kind) {
      case Stmt::Kind::Connect: {
        CombTask t;
        t.dst = static_cast<int>(fd.signal(s.lhs));
        t.prog = compile_expr(fd, s.rhs);
        if (fd.signals[static_cast<std::size_t>(t.dst)].kind == FlatSignal::Kind::Reg)
          fail(ErrKind::Internal, "connect to register survived resolution");
        combUnsorted.push_back(std::move(t));
        break;
      }
      case Stmt::Kind::RegNext: {
        RegTask t;
        t.dst = static_cast<int>(fd.signal(s.lhs));
        t.next = compile_expr(fd, s.rhs);
        sp.regs.push_back(std::move(t));
        break;
      }
      case Stmt::Kind::MemRead: {
        CombTask t;
        t.dst = static_cast<int>(fd.signal(s.lhs));
        t.mem = static_cast<int>(fd.memIndex.at(s.mem));
        t.prog = compile_expr(fd, s.addr);
        combUnsorted.push_back(std::move(t));
        break;
      }
      case Stmt::Kind::MemWrite: {
        MemWriteTask t;
        t.mem = static_cast<int>(fd.memIndex.at(s.lhs));
        t.addr = compile_expr(fd, s.addr);
        t.data = compile_expr(fd, s.rhs);
        t.en = compile_expr(fd, s.en);
        sp.memWrites.push_back(std::move(t));
        break;
      }
    }
  }

  // Kahn's algorithm over comb tasks: an edge runs from the producer of a
  // signal to each task whose program reads it.
  std::vector<int> producer(fd.signals.size(), -1);
  for (std::size_t i = 0; i < combUnsorted.size(); ++i)
    producer[static_cast<std::size_t>(combUnsorted[i].dst)] = static_cast<int>(i);
  std::vector<std::vector<int>> consumers(combUnsorted.size());
  std::vector<int> indegree(combUnsorted.size(), 0);
  for (std::size_t i = 0; i < combUnsorted.size(); ++i) {
    for (const Instr& in : combUnsorted[i].prog.code) {
      if (in.op != Op::Sig) continue;
      int p = producer[static_cast<std::size_t>(in.sig)];
      if (p < 0 || p == static_cast<int>(i)) continue;
      consumers[static_cast<std::size_t>(p)].push_back(static_cast<int>(i));
      ++indegree[i];
    }
  }
  std::deque<int> ready;
  for (std::size_t i = 0; i < combUnsorted.size(); ++i)
    if (indegree[i] == 0) ready.push_back(static_cast<int>(i));
  std::vector<int> order;
  order.reserve(combUnsorted.size());
  while (!ready.empty()) {
    int i = ready.front();
    ready.pop_front();
    order.push_back(i);
    for (int c : consumers[static_cast<std::size_t>(i)])
      if (--indegree[static_cast<std::size_t>(c)] == 0) ready.push_back(c);
  }
  if (order.size() != combUnsorted.size())
    fail(ErrKind::Internal, "combinational cycle survived validation");
  sp.comb.reserve(order.size());
  for (int i : order) sp.comb.push_back(std::move(combUnsorted[static_cast<std::size_t>(i)]));
  return sp;
}

}  // namespace nail::sim

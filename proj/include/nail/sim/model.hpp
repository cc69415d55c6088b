// SPDX-License-Identifier: Apache-2.0
//
// Compiles a flattened design into postfix programs over a flat value array,
// with combinational tasks pre-sorted into a topological order. The
// validator's acyclicity guarantee makes the sort total.
#pragma once

#include <vector>

#include "nail/nir/flatten.hpp"

namespace nail::sim {

enum class Op : std::uint8_t {
  Const, Sig, Not, And, Or, Xor, Add, Sub, Eq, Neq, Lt, Gt, Shl, Shr, Cat, Bits, Mux
};

struct Instr {
  Op op = Op::Const;
  unsigned width = 1;  // result width
  Value imm = 0;       // Const
  int sig = -1;        // Sig
  unsigned a = 0;      // Bits: hi
  unsigned b = 0;      // Bits: lo; Cat: width of the low-order operand
};

struct Program {
  std::vector<Instr> code;  // postfix
  unsigned width = 1;
};

struct CombTask {
  int dst = -1;
  int mem = -1;  // >= 0: dst = mem[prog] (combinational read)
  Program prog;
};

struct RegTask {
  int dst = -1;
  Program next;
};

struct MemWriteTask {
  int mem = -1;
  Program addr, data, en;
};

struct SimProgram {
  std::vector<CombTask> comb;  // topological order
  std::vector<RegTask> regs;
  std::vector<MemWriteTask> memWrites;
};

Program compile_expr(const nir::FlatDesign& fd, const nir::ExprPtr& e);
SimProgram compile(const nir::FlatDesign& fd);

Value eval_program(const Program& p, const std::vector<Value>& vals,
                   std::vector<Value>& stack);

}  // namespace nail::sim

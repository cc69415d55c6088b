// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nail/common.hpp"

// In-memory form of the NIR structural dialect. Single clock domain,
// unsigned values, explicit widths everywhere. Nodes are plain structs;
// expression trees are shared between circuits after copies, so they are
// treated as immutable once built.
namespace nail::nir {

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

enum class UnOp { Not };
enum class BinOp { And, Or, Xor, Add, Sub, Eq, Neq, Lt, Gt, Shl, Shr, Cat };

const char* bin_op_name(BinOp op);

struct Expr {
  enum class Kind { Literal, Ref, Mux, Unary, Binary, Bits };

  Kind kind = Kind::Literal;
  unsigned width = 0;  // filled by the parser's resolve step or by factories
  Value value = 0;     // Literal
  std::string path;    // Ref: local name or instance.port
  UnOp un = UnOp::Not;
  BinOp bin = BinOp::And;
  unsigned hi = 0, lo = 0;  // Bits
  std::vector<ExprPtr> args;
  int line = 0, col = 0;

  // Width-checked factories. These throw Error(Validate) when the operands
  // break a width rule; programmatic circuit construction goes through here.
  static ExprPtr literal(unsigned width, Value value);
  static ExprPtr ref(std::string path, unsigned width);
  static ExprPtr mux(ExprPtr cond, ExprPtr then_e, ExprPtr else_e);
  static ExprPtr unary(UnOp op, ExprPtr a);
  static ExprPtr binary(BinOp op, ExprPtr a, ExprPtr b);
  static ExprPtr bits(ExprPtr a, unsigned hi, unsigned lo);
};

// Width of a binary result per the dialect rules; throws on violations.
unsigned binary_result_width(BinOp op, unsigned wa, unsigned wb);

enum class PortDir { Input, Output };

struct Port {
  std::string name;
  PortDir dir = PortDir::Input;
  unsigned width = 1;
  int line = 0, col = 0;
};

struct Decl {
  enum class Kind { Wire, Reg, Mem, Instance };
  Kind kind = Kind::Wire;
  std::string name;
  unsigned width = 1;        // wire/reg/mem
  Value init = 0;            // reg reset value, applied at cycle 0
  std::uint64_t depth = 0;   // mem
  std::string moduleName;    // instance
  int line = 0, col = 0;

  static Decl wire(std::string name, unsigned width);
  static Decl reg(std::string name, unsigned width, Value init);
  static Decl mem(std::string name, unsigned width, std::uint64_t depth);
  static Decl instance(std::string name, std::string moduleName);
};

struct Stmt {
  enum class Kind { Connect, RegNext, MemRead, MemWrite };
  Kind kind = Kind::Connect;
  std::string lhs;  // Connect/RegNext target; MemRead destination; MemWrite mem
  std::string mem;  // MemRead mem
  ExprPtr rhs;      // Connect/RegNext rhs; MemWrite data
  ExprPtr addr;     // MemRead/MemWrite address
  ExprPtr en;       // MemWrite enable, width 1
  int line = 0, col = 0;

  static Stmt connect(std::string lhs, ExprPtr rhs);
  static Stmt reg_next(std::string reg, ExprPtr rhs);
  static Stmt mem_read(std::string dst, std::string mem, ExprPtr addr);
  static Stmt mem_write(std::string mem, ExprPtr addr, ExprPtr data, ExprPtr en);
};

struct ModuleDef {
  std::string name;
  std::vector<Port> ports;
  std::vector<Decl> decls;
  std::vector<Stmt> stmts;
  int line = 0, col = 0;

  const Port* find_port(const std::string& name) const;
  const Decl* find_decl(const std::string& name) const;
  bool has_name(const std::string& name) const;
};

struct Circuit {
  std::string name;
  std::vector<ModuleDef> modules;
  std::string top;

  const ModuleDef* find_module(const std::string& name) const;
  ModuleDef* find_module(const std::string& name);
};

// Structural equality; source locations are ignored.
bool equal(const Expr& a, const Expr& b);
bool equal(const ExprPtr& a, const ExprPtr& b);
bool equal(const Port& a, const Port& b);
bool equal(const Decl& a, const Decl& b);
bool equal(const Stmt& a, const Stmt& b);
bool equal(const ModuleDef& a, const ModuleDef& b);
bool equal(const Circuit& a, const Circuit& b);

inline bool operator==(const Circuit& a, const Circuit& b) { return equal(a, b); }
inline bool operator!=(const Circuit& a, const Circuit& b) { return !equal(a, b); }

}  // namespace nail::nir

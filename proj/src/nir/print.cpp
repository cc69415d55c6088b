// SPDX-License-Identifier: Apache-2.0
#include "nail/nir/print.hpp"

#include <sstream>

namespace nail::nir {

namespace {

void print_expr_to(std::ostream& os, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Literal:
      os << "UInt<" << e.width << ">(" << e.value << ")";
      break;
    case Expr::Kind::Ref:
      os << e.path;
      break;
    case Expr::Kind::Mux:
      os << "mux(";
      print_expr_to(os, *e.args[0]);
      os << ", ";
      print_expr_to(os, *e.args[1]);
      os << ", ";
      print_expr_to(os, *e.args[2]);
      os << ")";
      break;
    case Expr::Kind::Unary:
      os << "not(";
      print_expr_to(os, *e.args[0]);
      os << ")";
      break;
    case Expr::Kind::Binary:
      os << bin_op_name(e.bin) << "(";
      print_expr_to(os, *e.args[0]);
      os << ", ";
      print_expr_to(os, *e.args[1]);
      os << ")";
      break;
    case Expr::Kind::Bits:
      os << "bits(";
      print_expr_to(os, *e.args[0]);
      os << ", " << e.hi << ", " << e.lo << ")";
      break;
  }
}

void print_stmt(std::ostream& os, const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::Connect:
    case Stmt::Kind::RegNext:
      os << s.lhs << " <= ";
      print_expr_to(os, *s.rhs);
      break;
    case Stmt::Kind::MemRead:
      os << "read " << s.lhs << " <= " << s.mem << "[";
      print_expr_to(os, *s.addr);
      os << "]";
      break;
    case Stmt::Kind::MemWrite:
      os << "write " << s.lhs << "[";
      print_expr_to(os, *s.addr);
      os << "] <= ";
      print_expr_to(os, *s.rhs);
      os << " when ";
      print_expr_to(os, *s.en);
      break;
  }
}

}  // namespace

std::string print_expr(const Expr& e) {
  std::ostringstream os;
  print_expr_to(os, e);
  return os.str();
}

std::string print_circuit(const Circuit& c) {
  std::ostringstream os;
  os << "circuit " << c.name << " :\n";
  for (const auto& m : c.modules) {
    os << "  module " << m.name << " :\n";
    for (const auto& p : m.ports) {
      os << "    " << (p.dir == PortDir::Input ? "input" : "output") << " "
         << p.name << " : UInt<" << p.width << ">\n";
    }
    for (const auto& d : m.decls) {
      switch (d.kind) {
        case Decl::Kind::Wire:
          os << "    wire " << d.name << " : UInt<" << d.width << ">\n";
          break;
        case Decl::Kind::Reg:
          os << "    reg " << d.name << " : UInt<" << d.width << "> init "
             << d.init << "\n";
          break;
        case Decl::Kind::Mem:
          os << "    mem " << d.name << " : UInt<" << d.width << ">[" << d.depth
             << "]\n";
          break;
        case Decl::Kind::Instance:
          os << "    inst " << d.name << " of " << d.moduleName << "\n";
          break;
      }
    }
    for (const auto& s : m.stmts) {
      os << "    ";
      print_stmt(os, s);
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace nail::nir

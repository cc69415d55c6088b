// SPDX-License-Identifier: Apache-2.0
#include "nail/nir/parse.hpp"

#include <set>

#include "lexer.hpp"
#include "resolve.hpp"

namespace nail::nir {

namespace {

using detail::Token;
using detail::abort_parse;

const std::set<std::string> kKeywords = {
    "circuit", "module", "input", "output", "wire", "reg",  "mem", "inst",
    "of",      "init",   "read",  "write",  "when", "UInt", "mux", "not",
    "and",     "or",     "xor",   "add",    "sub",  "eq",   "neq", "lt",
    "gt",      "shl",    "shr",   "cat",    "bits"};

const std::map<std::string, BinOp> kBinOps = {
    {"and", BinOp::And}, {"or", BinOp::Or},   {"xor", BinOp::Xor},
    {"add", BinOp::Add}, {"sub", BinOp::Sub}, {"eq", BinOp::Eq},
    {"neq", BinOp::Neq}, {"lt", BinOp::Lt},   {"gt", BinOp::Gt},
    {"shl", BinOp::Shl}, {"shr", BinOp::Shr}, {"cat", BinOp::Cat}};

class Parser {
 public:
  explicit Parser(const std::string& text) : lexer_(text) { advance(); }

  Circuit parse() {
    Circuit c;
    expect_keyword("circuit");
    c.name = expect_name("circuit name");
    expect(Token::Kind::Colon, "':'");
    while (tok_.kind != Token::Kind::End) {
      if (tok_.kind == Token::Kind::Id && tok_.text == "module") {
        c.modules.push_back(parse_module());
      } else {
        abort_parse("expected 'module'", tok_.line, tok_.col);
      }
    }
    if (c.modules.empty())
      abort_parse("circuit has no modules", tok_.line, tok_.col);
    c.top = c.name;
    return c;
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  void expect(Token::Kind kind, const char* what) {
    if (tok_.kind != kind)
      abort_parse(std::string("expected ") + what, tok_.line, tok_.col);
    advance();
  }

  void expect_keyword(const char* kw) {
    if (tok_.kind != Token::Kind::Id || tok_.text != kw)
      abort_parse(std::string("expected '") + kw + "'", tok_.line, tok_.col);
    advance();
  }

  std::string expect_name(const char* what) {
    if (tok_.kind != Token::Kind::Id)
      abort_parse(std::string("expected ") + what, tok_.line, tok_.col);
    if (kKeywords.count(tok_.text))
      abort_parse("'" + tok_.text + "' is a reserved word", tok_.line, tok_.col);
    std::string name = tok_.text;
    advance();
    return name;
  }

  Value expect_int() {
    if (tok_.kind != Token::Kind::Int)
      abort_parse("expected integer literal", tok_.line, tok_.col);
    Value v = tok_.ival;
    advance();
    return v;
  }

  unsigned parse_type() {
    expect_keyword("UInt");
    expect(Token::Kind::Lt, "'<'");
    Value w = expect_int();
    if (w < 1 || w > kMaxWidth)
      abort_parse("width must be between 1 and 64", tok_.line, tok_.col);
    expect(Token::Kind::Gt, "'>'");
    return static_cast<unsigned>(w);
  }

  std::string parse_path() {
    std::string path = expect_name("identifier");
    while (tok_.kind == Token::Kind::Dot) {
      advance();
      path += '.';
      path += expect_name("identifier after '.'");
    }
    return path;
  }

  ExprPtr parse_expr() {
    int line = tok_.line, col = tok_.col;
    auto e = std::make_shared<Expr>();
    e->line = line;
    e->col = col;
    if (tok_.kind != Token::Kind::Id)
      abort_parse("expected expression", line, col);
    const std::string head = tok_.text;
    if (head == "UInt") {
      advance();
      expect(Token::Kind::Lt, "'<'");
      Value w = expect_int();
      if (w < 1 || w > kMaxWidth) abort_parse("width must be between 1 and 64", line, col);
      expect(Token::Kind::Gt, "'>'");
      expect(Token::Kind::LParen, "'('");
      Value v = expect_int();
      expect(Token::Kind::RParen, "')'");
      e->kind = Expr::Kind::Literal;
      e->width = static_cast<unsigned>(w);
      e->value = v;
      return e;
    }
    if (head == "mux") {
      advance();
      expect(Token::Kind::LParen, "'('");
      auto c = parse_expr();
      expect(Token::Kind::Comma, "','");
      auto a = parse_expr();
      expect(Token::Kind::Comma, "','");
      auto b = parse_expr();
      expect(Token::Kind::RParen, "')'");
      e->kind = Expr::Kind::Mux;
      e->args = {c, a, b};
      return e;
    }
    if (head == "not") {
      advance();
      expect(Token::Kind::LParen, "'('");
      auto a = parse_expr();
      expect(Token::Kind::RParen, "')'");
      e->kind = Expr::Kind::Unary;
      e->un = UnOp::Not;
      e->args = {a};
      return e;
    }
    if (head == "bits") {
      advance();
      expect(Token::Kind::LParen, "'('");
      auto a = parse_expr();
      expect(Token::Kind::Comma, "','");
      Value hi = expect_int();
      expect(Token::Kind::Comma, "','");
      Value lo = expect_int();
      expect(Token::Kind::RParen, "')'");
      if (hi > 63 || lo > 63) abort_parse("bits index exceeds 64-bit range", line, col);
      e->kind = Expr::Kind::Bits;
      e->hi = static_cast<unsigned>(hi);
      e->lo = static_cast<unsigned>(lo);
      e->args = {a};
      return e;
    }
    if (auto it = kBinOps.find(head); it != kBinOps.end()) {
      advance();
      expect(Token::Kind::LParen, "'('");
      auto a = parse_expr();
      expect(Token::Kind::Comma, "','");
      auto b = parse_expr();
      expect(Token::Kind::RParen, "')'");
      e->kind = Expr::Kind::Binary;
      e->bin = it->second;
      e->args = {a, b};
      return e;
    }
    e->kind = Expr::Kind::Ref;
    e->path = parse_path();
    return e;
  }

  ModuleDef parse_module() {
    ModuleDef m;
    m.line = tok_.line;
    m.col = tok_.col;
    expect_keyword("module");
    m.name = expect_name("module name");
    expect(Token::Kind::Colon, "':'");
    while (tok_.kind == Token::Kind::Id && tok_.text != "module") {
      parse_item(m);
    }
    return m;
  }

  void parse_item(ModuleDef& m) {
    int line = tok_.line, col = tok_.col;
    const std::string head = tok_.text;
    if (head == "input" || head == "output") {
      advance();
      Port p;
      p.line = line;
      p.col = col;
      p.dir = head == "input" ? PortDir::Input : PortDir::Output;
      p.name = expect_name("port name");
      expect(Token::Kind::Colon, "':'");
      p.width = parse_type();
      m.ports.push_back(std::move(p));
      return;
    }
    if (head == "wire") {
      advance();
      std::string name = expect_name("wire name");
      expect(Token::Kind::Colon, "':'");
      Decl d = Decl::wire(name, parse_type());
      d.line = line;
      d.col = col;
      m.decls.push_back(std::move(d));
      return;
    }
    if (head == "reg") {
      advance();
      std::string name = expect_name("register name");
      expect(Token::Kind::Colon, "':'");
      unsigned w = parse_type();
      expect_keyword("init");
      Value init = expect_int();
      if (!fits(init, w))
        abort_parse("init value does not fit register width", line, col);
      Decl d = Decl::reg(name, w, init);
      d.line = line;
      d.col = col;
      m.decls.push_back(std::move(d));
      return;
    }
    if (head == "mem") {
      advance();
      std::string name = expect_name("memory name");
      expect(Token::Kind::Colon, "':'");
      unsigned w = parse_type();
      expect(Token::Kind::LBrack, "'['");
      Value depth = expect_int();
      if (depth == 0) abort_parse("memory depth must be >= 1", line, col);
      expect(Token::Kind::RBrack, "']'");
      Decl d = Decl::mem(name, w, depth);
      d.line = line;
      d.col = col;
      m.decls.push_back(std::move(d));
      return;
    }
    if (head == "inst") {
      advance();
      std::string name = expect_name("instance name");
      expect_keyword("of");
      std::string mod = expect_name("module name");
      Decl d = Decl::instance(name, mod);
      d.line = line;
      d.col = col;
      m.decls.push_back(std::move(d));
      return;
    }
    if (head == "read") {
      advance();
      std::string dst = parse_path();
      expect(Token::Kind::LtEq, "'<='");
      std::string mem = parse_path();
      expect(Token::Kind::LBrack, "'['");
      auto addr = parse_expr();
      expect(Token::Kind::RBrack, "']'");
      Stmt s = Stmt::mem_read(dst, mem, addr);
      s.line = line;
      s.col = col;
      m.stmts.push_back(std::move(s));
      return;
    }
    if (head == "write") {
      advance();
      std::string mem = parse_path();
      expect(Token::Kind::LBrack, "'['");
      auto addr = parse_expr();
      expect(Token::Kind::RBrack, "']'");
      expect(Token::Kind::LtEq, "'<='");
      auto data = parse_expr();
      expect_keyword("when");
      auto en = parse_expr();
      Stmt s = Stmt::mem_write(mem, addr, data, en);
      s.line = line;
      s.col = col;
      m.stmts.push_back(std::move(s));
      return;
    }
    if (kKeywords.count(head))
      abort_parse("unexpected keyword '" + head + "'", line, col);
    // Plain connection. Register targets are rewritten to next-value
    // statements during resolution.
    std::string lhs = parse_path();
    expect(Token::Kind::LtEq, "'<='");
    auto rhs = parse_expr();
    Stmt s = Stmt::connect(lhs, rhs);
    s.line = line;
    s.col = col;
    m.stmts.push_back(std::move(s));
  }

  detail::Lexer lexer_;
  Token tok_;
};

}  // namespace

ParseResult parse_circuit(const std::string& text) {
  ParseResult result;
  try {
    Parser parser(text);
    Circuit c = parser.parse();
    std::vector<Diagnostic> diags;
    detail::resolve_circuit(c, /*fill=*/true, /*stopAtFirst=*/true, diags);
    if (!diags.empty()) {
      result.error = diags.front();
      return result;
    }
    result.circuit = std::move(c);
  } catch (const detail::ParseAbort& abort) {
    result.error = abort.diag;
  }
  return result;
}

}  // namespace nail::nir

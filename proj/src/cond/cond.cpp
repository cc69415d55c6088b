// SPDX-License-Identifier: Apache-2.0
#include "nail/cond/cond.hpp"

#include <cctype>
#include <functional>

namespace nail::cond {

namespace {

struct ResolvedSig {
  unsigned width = 0;
  int scopeLevel = 0;
};

using Resolver = std::function<std::optional<ResolvedSig>(const std::string&)>;

struct CondAbort {
  Diagnostic diag;
};

[[noreturn]] void abort_cond(const std::string& msg, int col) {
  throw CondAbort{Diagnostic{"E_SYNTAX", msg, 1, col}};
}

struct Tok {
  enum class Kind { SfIntro, Path, Int, LParen, RParen, Comma, OrOr, AndAnd, Not, Eq, Ne, Lt, Gt, End };
  Kind kind = Kind::End;
  std::string text;
  Value ival = 0;
  int col = 1;
};

class CondLexer {
 public:
  explicit CondLexer(const std::string& text) : text_(text) {}

  Tok next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    Tok t;
    t.col = static_cast<int>(pos_) + 1;
    if (pos_ >= text_.size()) return t;
    char c = text_[pos_];
    auto two = [&](char a, char b) {
      return c == a && pos_ + 1 < text_.size() && text_[pos_ + 1] == b;
    };
    if (c == '$') {
      if (text_.compare(pos_, 4, "$sf(") == 0 ||
          (text_.compare(pos_, 3, "$sf") == 0 && pos_ + 3 >= text_.size())) {
        pos_ += 3;
        t.kind = Tok::Kind::SfIntro;
        return t;
      }
      abort_cond("expected '$sf'", t.col);
    }
    if (two('|', '|')) { pos_ += 2; t.kind = Tok::Kind::OrOr; return t; }
    if (two('&', '&')) { pos_ += 2; t.kind = Tok::Kind::AndAnd; return t; }
    if (two('=', '=')) { pos_ += 2; t.kind = Tok::Kind::Eq; return t; }
    if (two('!', '=')) { pos_ += 2; t.kind = Tok::Kind::Ne; return t; }
    if (c == '!') { ++pos_; t.kind = Tok::Kind::Not; return t; }
    if (c == '<') { ++pos_; t.kind = Tok::Kind::Lt; return t; }
    if (c == '>') { ++pos_; t.kind = Tok::Kind::Gt; return t; }
    if (c == '(') { ++pos_; t.kind = Tok::Kind::LParen; return t; }
    if (c == ')') { ++pos_; t.kind = Tok::Kind::RParen; return t; }
    if (c == ',') { ++pos_; t.kind = Tok::Kind::Comma; return t; }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::Kind::Int;
      bool hex = false;
      Value v = 0;
      bool any = false;
      if (c == '0' && pos_ + 1 < text_.size() &&
          (text_[pos_ + 1] == 'x' || text_[pos_ + 1] == 'X')) {
        hex = true;
        pos_ += 2;
      }
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        Value digit;
        if (d >= '0' && d <= '9') digit = static_cast<Value>(d - '0');
        else if (hex && d >= 'a' && d <= 'f') digit = static_cast<Value>(d - 'a' + 10);
        else if (hex && d >= 'A' && d <= 'F') digit = static_cast<Value>(d - 'A' + 10);
        else break;
        const Value base = hex ? 16 : 10;
        if (v > (~Value{0} - digit) / base) abort_cond("literal exceeds 64 bits", t.col);
        v = v * base + digit;
        any = true;
        ++pos_;
      }
      if (!any) abort_cond("malformed literal", t.col);
      t.ival = v;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::Kind::Path;
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.') {
          t.text.push_back(d);
          ++pos_;
        } else {
          break;
        }
      }
      if (t.text.back() == '.') abort_cond("path ends with '.'", t.col);
      return t;
    }
    abort_cond(std::string("unexpected character '") + c + "'", t.col);
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
};

CondPtr make_node(CondExpr n) { return std::make_shared<CondExpr>(std::move(n)); }

// Literals parse with width 0 (undetermined) and take their width from the
// other side of a comparison, or 1 in boolean positions.
class CondParser {
 public:
  CondParser(const std::string& text, Resolver resolver)
      : lexer_(text), resolver_(std::move(resolver)) {
    advance();
  }

  ParsedCondition run() {
    CondPtr root = parse_or();
    if (tok_.kind != Tok::Kind::End)
      abort_cond("unexpected trailing input", tok_.col);
    root = finalize_bool(root);
    ParsedCondition out;
    out.expr = root;
    out.fields = fields_;
    out.signals = signals_;
    return out;
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  CondPtr parse_or() {
    CondPtr lhs = parse_and();
    while (tok_.kind == Tok::Kind::OrOr) {
      advance();
      CondPtr rhs = parse_and();
      CondExpr n;
      n.kind = CondExpr::Kind::Bool;
      n.bop = CondExpr::BoolOp::Or;
      n.width = 1;
      n.args = {finalize_bool(lhs), finalize_bool(rhs)};
      lhs = make_node(std::move(n));
    }
    return lhs;
  }

  CondPtr parse_and() {
    CondPtr lhs = parse_not();
    while (tok_.kind == Tok::Kind::AndAnd) {
      advance();
      CondPtr rhs = parse_not();
      CondExpr n;
      n.kind = CondExpr::Kind::Bool;
      n.bop = CondExpr::BoolOp::And;
      n.width = 1;
      n.args = {finalize_bool(lhs), finalize_bool(rhs)};
      lhs = make_node(std::move(n));
    }
    return lhs;
  }

  CondPtr parse_not() {
    if (tok_.kind == Tok::Kind::Not) {
      int col = tok_.col;
      advance();
      CondPtr a = parse_atom(col);
      CondExpr n;
      n.kind = CondExpr::Kind::Bool;
      n.bop = CondExpr::BoolOp::Not;
      n.width = 1;
      n.args = {finalize_bool(a)};
      return make_node(std::move(n));
    }
    return parse_atom(tok_.col);
  }

  CondPtr parse_atom(int col) {
    if (tok_.kind == Tok::Kind::LParen) {
      advance();
      CondPtr inner = parse_or();
      if (tok_.kind != Tok::Kind::RParen) abort_cond("expected ')'", tok_.col);
      advance();
      return inner;
    }
    CondPtr lhs = parse_term(col);
    CondExpr::Cmp cmp;
    switch (tok_.kind) {
      case Tok::Kind::Eq: cmp = CondExpr::Cmp::Eq; break;
      case Tok::Kind::Ne: cmp = CondExpr::Cmp::Ne; break;
      case Tok::Kind::Lt: cmp = CondExpr::Cmp::Lt; break;
      case Tok::Kind::Gt: cmp = CondExpr::Cmp::Gt; break;
      default: return lhs;
    }
    int cmpCol = tok_.col;
    advance();
    CondPtr rhs = parse_term(tok_.col);
    unsigned wl = lhs->width, wr = rhs->width;
    if (wl == 0 && wr == 0)
      abort_cond("cannot infer a width for a literal-only comparison", cmpCol);
    if (wl == 0) lhs = finalize_literal(lhs, wr, cmpCol);
    if (wr == 0) rhs = finalize_literal(rhs, wl, cmpCol);
    if (lhs->width != rhs->width)
      abort_cond("comparison operands have widths " + std::to_string(lhs->width) +
                     " and " + std::to_string(rhs->width),
                 cmpCol);
    CondExpr n;
    n.kind = CondExpr::Kind::Compare;
    n.cmp = cmp;
    n.width = 1;
    n.args = {lhs, rhs};
    return make_node(std::move(n));
  }

  CondPtr parse_term(int col) {
    if (tok_.kind == Tok::Kind::SfIntro) {
      advance();
      if (tok_.kind != Tok::Kind::LParen) abort_cond("expected '(' after $sf", tok_.col);
      advance();
      if (tok_.kind != Tok::Kind::Path || tok_.text.find('.') != std::string::npos)
        abort_cond("expected scan field name", tok_.col);
      std::string name = tok_.text;
      advance();
      if (tok_.kind != Tok::Kind::Comma) abort_cond("expected ','", tok_.col);
      advance();
      if (tok_.kind != Tok::Kind::Int) abort_cond("expected field width", tok_.col);
      Value w = tok_.ival;
      advance();
      if (tok_.kind != Tok::Kind::RParen) abort_cond("expected ')'", tok_.col);
      advance();
      if (w < 1 || w > kMaxWidth) abort_cond("scan field width out of range", col);
      auto width = static_cast<unsigned>(w);
      bool seen = false;
      for (const auto& f : fields_) {
        if (f.name == name) {
          seen = true;
          if (f.width != width)
            abort_cond("scan field '" + name + "' redeclared with width " +
                           std::to_string(width) + " (was " + std::to_string(f.width) + ")",
                       col);
        }
      }
      if (!seen) fields_.push_back(ScanFieldDecl{name, width});
      CondExpr n;
      n.kind = CondExpr::Kind::ScanField;
      n.name = name;
      n.width = width;
      return make_node(std::move(n));
    }
    if (tok_.kind == Tok::Kind::Int) {
      CondExpr n;
      n.kind = CondExpr::Kind::Literal;
      n.value = tok_.ival;
      n.width = 0;  // pending; fixed by comparison or boolean context
      advance();
      return make_node(std::move(n));
    }
    if (tok_.kind == Tok::Kind::Path) {
      std::string path = tok_.text;
      advance();
      auto resolved = resolver_(path);
      if (!resolved)
        throw CondAbort{Diagnostic{"E_UNRESOLVED",
                                   "condition references unknown signal '" + path + "'",
                                   1, col}};
      bool seen = false;
      for (const auto& s : signals_)
        if (s.path == path) seen = true;
      if (!seen)
        signals_.push_back(SignalUse{path, resolved->width, resolved->scopeLevel});
      CondExpr n;
      n.kind = CondExpr::Kind::Signal;
      n.name = path;
      n.width = resolved->width;
      return make_node(std::move(n));
    }
    abort_cond("expected a term", tok_.col);
  }

  CondPtr finalize_literal(const CondPtr& lit, unsigned width, int col) {
    if (!fits(lit->value, width))
      abort_cond("literal " + std::to_string(lit->value) + " does not fit width " +
                     std::to_string(width),
                 col);
    CondExpr n = *lit;
    n.width = width;
    return make_node(std::move(n));
  }

  // Boolean operands and the root must have width 1.
  CondPtr finalize_bool(const CondPtr& e) {
    if (e->width == 0) return finalize_literal(e, 1, 1);
    if (e->width != 1)
      abort_cond("operand of a boolean context has width " + std::to_string(e->width) +
                     "; expected 1",
                 1);
    return e;
  }

  CondLexer lexer_;
  Tok tok_;
  Resolver resolver_;
  std::vector<ScanFieldDecl> fields_;
  std::vector<SignalUse> signals_;
};

CondParseResult run_parser(const std::string& text, Resolver resolver) {
  CondParseResult result;
  try {
    CondParser parser(text, std::move(resolver));
    result.parsed = parser.run();
  } catch (const CondAbort& abort) {
    result.error = abort.diag;
  }
  return result;
}

std::optional<ResolvedSig> resolve_in_module(const nir::Circuit* circuit,
                                             const nir::ModuleDef& scope,
                                             const std::string& path) {
  auto segs = split_path(path);
  if (segs.size() == 1) {
    if (const auto* p = scope.find_port(segs[0]))
      return ResolvedSig{p->width, 0};
    if (const auto* d = scope.find_decl(segs[0])) {
      if (d->kind == nir::Decl::Kind::Wire || d->kind == nir::Decl::Kind::Reg)
        return ResolvedSig{d->width, 0};
    }
    return std::nullopt;
  }
  if (segs.size() == 2 && circuit != nullptr) {
    const auto* d = scope.find_decl(segs[0]);
    if (d == nullptr || d->kind != nir::Decl::Kind::Instance) return std::nullopt;
    const auto* child = circuit->find_module(d->moduleName);
    if (child == nullptr) return std::nullopt;
    if (const auto* p = child->find_port(segs[1]))
      return ResolvedSig{p->width, 0};
  }
  return std::nullopt;
}

}  // namespace

CondParseResult parse_condition(const std::string& text,
                                const nir::ModuleDef& scope) {
  return run_parser(text, [&scope](const std::string& path) {
    return resolve_in_module(nullptr, scope, path);
  });
}

CondParseResult parse_condition_scoped(
    const std::string& text, const nir::Circuit& circuit,
    std::span<const nir::ModuleDef* const> scopes) {
  return run_parser(text, [&](const std::string& path) -> std::optional<ResolvedSig> {
    for (std::size_t level = 0; level < scopes.size(); ++level) {
      auto hit = resolve_in_module(&circuit, *scopes[level], path);
      if (hit) return ResolvedSig{hit->width, static_cast<int>(level)};
    }
    return std::nullopt;
  });
}

Value eval_condition(const CondPtr& expr,
                     const std::map<std::string, Value>& signals,
                     const std::map<std::string, Value>& fields) {
  if (!expr) fail(ErrKind::Internal, "null condition");
  switch (expr->kind) {
    case CondExpr::Kind::ScanField: {
      auto it = fields.find(expr->name);
      if (it == fields.end())
        fail(ErrKind::Validate, "missing scan field value '" + expr->name + "'");
      if (!fits(it->second, expr->width))
        fail(ErrKind::Validate, "scan field value does not fit '" + expr->name + "'");
      return it->second;
    }
    case CondExpr::Kind::Signal: {
      auto it = signals.find(expr->name);
      if (it == signals.end())
        fail(ErrKind::Validate, "missing signal value '" + expr->name + "'");
      if (!fits(it->second, expr->width))
        fail(ErrKind::Validate, "signal value does not fit '" + expr->name + "'");
      return it->second;
    }
    case CondExpr::Kind::Literal:
      return expr->value;
    case CondExpr::Kind::Compare: {
      Value a = eval_condition(expr->args[0], signals, fields);
      Value b = eval_condition(expr->args[1], signals, fields);
      switch (expr->cmp) {
        case CondExpr::Cmp::Eq: return a == b ? 1 : 0;
        case CondExpr::Cmp::Ne: return a != b ? 1 : 0;
        case CondExpr::Cmp::Lt: return a < b ? 1 : 0;
        case CondExpr::Cmp::Gt: return a > b ? 1 : 0;
      }
      break;
    }
    case CondExpr::Kind::Bool: {
      Value a = eval_condition(expr->args[0], signals, fields);
      switch (expr->bop) {
        case CondExpr::BoolOp::Not: return a ? 0 : 1;
        case CondExpr::BoolOp::And:
          return (a && eval_condition(expr->args[1], signals, fields)) ? 1 : 0;
        case CondExpr::BoolOp::Or:
          return (a || eval_condition(expr->args[1], signals, fields)) ? 1 : 0;
      }
      break;
    }
  }
  fail(ErrKind::Internal, "unknown condition node");
}

}  // namespace nail::cond

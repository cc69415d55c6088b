// SPDX-License-Identifier: Apache-2.0
#include "lexer.hpp"

#include <cctype>

namespace nail::nir::detail {

void abort_parse(const std::string& message, int line, int col) {
  throw ParseAbort{Diagnostic{"E_SYNTAX", message, line, col}};
}

char Lexer::get() {
  char c = text_[pos_++];
  if (c == '\n') {
    ++line_;
    col_ = 1;
  } else {
    ++col_;
  }
  return c;
}

void Lexer::skip_trivia() {
  while (pos_ < text_.size()) {
    char c = peek();
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      get();
    } else if (c == '#') {
      while (pos_ < text_.size() && peek() != '\n') get();
    } else {
      break;
    }
  }
}

Token Lexer::next() {
  skip_trivia();
  Token t;
  t.line = line_;
  t.col = col_;
  if (pos_ >= text_.size()) {
    t.kind = Token::Kind::End;
    return t;
  }
  char c = peek();
  if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
    t.kind = Token::Kind::Id;
    while (pos_ < text_.size()) {
      char d = peek();
      if (std::isalnum(static_cast<unsigned char>(d)) || d == '_') {
        t.text.push_back(get());
      } else {
        break;
      }
    }
    return t;
  }
  if (std::isdigit(static_cast<unsigned char>(c))) {
    t.kind = Token::Kind::Int;
    bool hex = false;
    t.text.push_back(get());
    if (t.text[0] == '0' && (peek() == 'x' || peek() == 'X')) {
      hex = true;
      t.text.push_back(get());
      if (!std::isxdigit(static_cast<unsigned char>(peek())))
        abort_parse("malformed hex literal", t.line, t.col);
    }
    while (pos_ < text_.size()) {
      char d = peek();
      bool ok = hex ? std::isxdigit(static_cast<unsigned char>(d)) != 0
                    : std::isdigit(static_cast<unsigned char>(d)) != 0;
      if (!ok) break;
      t.text.push_back(get());
    }
    if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')
      abort_parse("malformed integer literal", t.line, t.col);
    Value v = 0;
    const unsigned base = hex ? 16 : 10;
    std::size_t start = hex ? 2 : 0;
    for (std::size_t i = start; i < t.text.size(); ++i) {
      char d = t.text[i];
      Value digit = 0;
      if (d >= '0' && d <= '9')
        digit = static_cast<Value>(d - '0');
      else if (d >= 'a' && d <= 'f')
        digit = static_cast<Value>(d - 'a' + 10);
      else
        digit = static_cast<Value>(d - 'A' + 10);
      if (v > (~Value{0} - digit) / base)
        abort_parse("integer literal exceeds 64 bits", t.line, t.col);
      v = v * base + digit;
    }
    t.ival = v;
    return t;
  }
  get();
  switch (c) {
    case ':': t.kind = Token::Kind::Colon; return t;
    case '<':
      if (peek() == '=') {
        get();
        t.kind = Token::Kind::LtEq;
      } else {
        t.kind = Token::Kind::Lt;
      }
      return t;
    case '>': t.kind = Token::Kind::Gt; return t;
    case '(': t.kind = Token::Kind::LParen; return t;
    case ')': t.kind = Token::Kind::RParen; return t;
    case '[': t.kind = Token::Kind::LBrack; return t;
    case ']': t.kind = Token::Kind::RBrack; return t;
    case ',': t.kind = Token::Kind::Comma; return t;
    case '.': t.kind = Token::Kind::Dot; return t;
    default:
      abort_parse(std::string("unexpected character '") + c + "'", t.line, t.col);
  }
}

}  // namespace nail::nir::detail

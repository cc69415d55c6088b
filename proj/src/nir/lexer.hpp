// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "nail/common.hpp"

namespace nail::nir::detail {

struct Token {
  enum class Kind {
    Id,
    Int,
    Colon,
    Lt,
    Gt,
    LtEq,  // "<=" connection arrow
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    End,
  };
  Kind kind = Kind::End;
  std::string text;
  Value ival = 0;
  int line = 1, col = 1;
};

// Thrown internally by the lexer/parser; converted to a ParseResult at the
// parse_circuit boundary.
struct ParseAbort {
  Diagnostic diag;
};

[[noreturn]] void abort_parse(const std::string& message, int line, int col);

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}
  Token next();

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char get();
  void skip_trivia();

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

}  // namespace nail::nir::detail

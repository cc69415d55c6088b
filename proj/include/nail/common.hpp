// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nail {

// All signal values fit in 64 bits; wider signals are rejected up front.
using Value = std::uint64_t;
inline constexpr unsigned kMaxWidth = 64;

constexpr Value mask_of(unsigned width) {
  return width >= 64 ? ~Value{0} : ((Value{1} << width) - 1);
}

constexpr bool fits(Value v, unsigned width) {
  return (v & ~mask_of(width)) == 0;
}

struct Diagnostic {
  std::string code;     // E_MULTIDRIVE, E_UNDRIVEN, E_COMBLOOP, E_WIDTH, E_UNRESOLVED, E_SYNTAX
  std::string message;
  int line = 0;         // 1-based; 0 when the construct has no source location
  int col = 0;
  std::string str() const;
};

enum class ErrKind { Io, Parse, Validate, Checksum, Internal };

class Error : public std::runtime_error {
 public:
  Error(ErrKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}
  ErrKind kind() const { return kind_; }

 private:
  ErrKind kind_;
};

[[noreturn]] inline void fail(ErrKind kind, const std::string& message) {
  throw Error(kind, message);
}

// Hierarchical path helpers. Paths use '.' separators and never contain
// empty segments.
std::vector<std::string> split_path(const std::string& path);
std::string join_path(const std::vector<std::string>& segments);
bool is_identifier(const std::string& s);

}  // namespace nail

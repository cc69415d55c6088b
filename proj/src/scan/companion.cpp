// SPDX-License-Identifier: Apache-2.0
#include "nail/scan/companion.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace nail::scan {

namespace {

std::string sanitize(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '.')
      out.push_back('_');
    else
      out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::string emit_companion(const ScanChainDescriptor& d) {
  check_descriptor(d);
  const std::string chain = sanitize(d.chainId);

  struct Line {
    unsigned offset;
    std::string base;
    unsigned width;
  };
  std::vector<Line> lines;
  std::set<std::string> seen;
  for (const auto& e : d.entries) {
    for (const auto& f : e.fields) {
      std::string base =
          "NAIL_" + chain + "_" + sanitize(e.componentId) + "_" + sanitize(f.name);
      if (!seen.insert(base).second)
        fail(ErrKind::Validate, "macro name collision: " + base);
      lines.push_back({f.offset, std::move(base), f.width});
    }
  }
  std::sort(lines.begin(), lines.end(),
            [](const Line& a, const Line& b) { return a.offset < b.offset; });

  std::ostringstream out;
  out << "#define NAIL_" << chain << "_TOTAL_BITS " << d.totalWidth << "\n";
  for (const auto& l : lines) {
    out << "#define " << l.base << "_OFFSET " << l.offset << "\n";
    out << "#define " << l.base << "_WIDTH " << l.width << "\n";
  }
  return out.str();
}

}  // namespace nail::scan

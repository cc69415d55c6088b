// SPDX-License-Identifier: Apache-2.0
#include "nail/scan/crc32.hpp"

#include <array>

namespace nail::scan {

namespace {

constexpr std::array<std::uint32_t, 256> make_table() {
  std::array<std::uint32_t, 256> t{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t c = i;
    for (int k = 0; k < 8; ++k)
      c = (c & 1) ? (0xEDB88320u ^ (c >> 1)) : (c >> 1);
    t[i] = c;
  }
  return t;
}

constexpr auto kTable = make_table();

}  // namespace

std::uint32_t crc32_update(std::uint32_t crc, std::uint8_t byte) {
  return kTable[(crc ^ byte) & 0xFFu] ^ (crc >> 8);
}

std::uint32_t crc32_ieee(std::span<const std::uint8_t> data) {
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::uint8_t b : data) crc = crc32_update(crc, b);
  return crc ^ 0xFFFFFFFFu;
}

}  // namespace nail::scan

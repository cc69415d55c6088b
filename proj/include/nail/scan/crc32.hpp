// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>

namespace nail::scan {

// CRC-32/IEEE (reflected, poly 0xEDB88320, init and final xor 0xFFFFFFFF).
// crc32_ieee("123456789") == 0xCBF43926.
std::uint32_t crc32_ieee(std::span<const std::uint8_t> data);

std::uint32_t crc32_update(std::uint32_t crc, std::uint8_t byte);

}  // namespace nail::scan

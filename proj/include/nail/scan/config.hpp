// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nail/common.hpp"
#include "nail/scan/descriptor.hpp"

namespace nail::scan {

// Payload plus CRC-32 of the payload. On disk: payload bytes followed by the
// checksum, little-endian.
struct PackedConfig {
  std::vector<std::uint8_t> payload;
  std::uint32_t checksum = 0;

  bool checksum_ok() const;

  bool operator==(const PackedConfig&) const = default;
};

std::vector<std::uint8_t> packed_to_bytes(const PackedConfig& p);
PackedConfig packed_from_bytes(std::span<const std::uint8_t> bytes);

void write_packed_file(const std::string& path, const PackedConfig& p);
PackedConfig read_packed_file(const std::string& path);

// A full assignment of chain bits, addressed by (componentId, fieldName).
// Value type; copies are independent.
class ScanConfig {
 public:
  explicit ScanConfig(std::shared_ptr<const ScanChainDescriptor> desc);

  const ScanChainDescriptor& descriptor() const { return *desc_; }
  std::shared_ptr<const ScanChainDescriptor> descriptor_ptr() const { return desc_; }

  void set(const std::string& componentId, const std::string& fieldName, Value v);
  Value get(const std::string& componentId, const std::string& fieldName) const;

  // Raw chain bits, index = descriptor offset.
  bool bit(unsigned index) const;
  void set_bit(unsigned index, bool v);
  unsigned total_bits() const { return desc_->totalWidth; }

  // Payload bit k = chain bit at offset k, packed LSB-first into byte k/8.
  // Pad bits in the last byte are zero.
  PackedConfig pack() const;
  static ScanConfig unpack(const PackedConfig& p,
                           std::shared_ptr<const ScanChainDescriptor> desc);

  bool operator==(const ScanConfig& other) const { return bits_ == other.bits_; }

 private:
  std::shared_ptr<const ScanChainDescriptor> desc_;
  std::vector<std::uint8_t> bits_;  // one byte per bit, 0 or 1
};

}  // namespace nail::scan

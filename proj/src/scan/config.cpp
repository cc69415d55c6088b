// SPDX-License-Identifier: Apache-2.0
#include "nail/scan/config.hpp"

#include <fstream>

#include "nail/scan/crc32.hpp"

namespace nail::scan {

bool PackedConfig::checksum_ok() const {
  return crc32_ieee(payload) == checksum;
}

std::vector<std::uint8_t> packed_to_bytes(const PackedConfig& p) {
  std::vector<std::uint8_t> out = p.payload;
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<std::uint8_t>((p.checksum >> (8 * i)) & 0xFF));
  return out;
}

PackedConfig packed_from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4)
    fail(ErrKind::Validate, "packed config shorter than its checksum");
  PackedConfig p;
  p.payload.assign(bytes.begin(), bytes.end() - 4);
  p.checksum = 0;
  for (int i = 0; i < 4; ++i)
    p.checksum |= static_cast<std::uint32_t>(bytes[bytes.size() - 4 + i]) << (8 * i);
  return p;
}

void write_packed_file(const std::string& path, const PackedConfig& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrKind::Io, "cannot open '" + path + "' for writing");
  auto bytes = packed_to_bytes(p);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrKind::Io, "write failed for '" + path + "'");
}

PackedConfig read_packed_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrKind::Io, "cannot open '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return packed_from_bytes(bytes);
}

ScanConfig::ScanConfig(std::shared_ptr<const ScanChainDescriptor> desc)
    : desc_(std::move(desc)) {
  if (!desc_) fail(ErrKind::Internal, "null descriptor");
  check_descriptor(*desc_);
  bits_.assign(desc_->totalWidth, 0);
}

void ScanConfig::set(const std::string& componentId, const std::string& fieldName,
                     Value v) {
  const auto* c = desc_->find_component(componentId);
  if (c == nullptr)
    fail(ErrKind::Validate, "no component '" + componentId + "' in chain '" +
                                desc_->chainId + "'");
  const auto* f = desc_->find_field(componentId, fieldName);
  if (f == nullptr)
    fail(ErrKind::Validate, "no field '" + fieldName + "' in '" + componentId + "'");
  if (!fits(v, f->width))
    fail(ErrKind::Validate, "value " + std::to_string(v) + " does not fit " +
                                componentId + "." + fieldName + " (width " +
                                std::to_string(f->width) + ")");
  if (c->kind == ComponentKind::LfsrFlip && fieldName == "seed" && v == 0)
    fail(ErrKind::Validate, "lfsr seed must be nonzero");
  for (unsigned b = 0; b < f->width; ++b)
    bits_[f->offset + b] = static_cast<std::uint8_t>((v >> b) & 1);
}

Value ScanConfig::get(const std::string& componentId,
                      const std::string& fieldName) const {
  const auto* f = desc_->find_field(componentId, fieldName);
  if (f == nullptr)
    fail(ErrKind::Validate, "no field '" + componentId + "." + fieldName + "'");
  Value v = 0;
  for (unsigned b = 0; b < f->width; ++b)
    v |= static_cast<Value>(bits_[f->offset + b]) << b;
  return v;
}

bool ScanConfig::bit(unsigned index) const {
  if (index >= bits_.size()) fail(ErrKind::Validate, "bit index out of range");
  return bits_[index] != 0;
}

void ScanConfig::set_bit(unsigned index, bool v) {
  if (index >= bits_.size()) fail(ErrKind::Validate, "bit index out of range");
  bits_[index] = v ? 1 : 0;
}

PackedConfig ScanConfig::pack() const {
  PackedConfig p;
  p.payload.assign((bits_.size() + 7) / 8, 0);
  for (unsigned k = 0; k < bits_.size(); ++k)
    if (bits_[k]) p.payload[k / 8] |= static_cast<std::uint8_t>(1u << (k % 8));
  p.checksum = crc32_ieee(p.payload);
  return p;
}

ScanConfig ScanConfig::unpack(const PackedConfig& p,
                              std::shared_ptr<const ScanChainDescriptor> desc) {
  if (!p.checksum_ok()) fail(ErrKind::Checksum, "packed config checksum mismatch");
  ScanConfig cfg(std::move(desc));
  const std::size_t need = (cfg.bits_.size() + 7) / 8;
  if (p.payload.size() != need)
    fail(ErrKind::Validate, "payload is " + std::to_string(p.payload.size()) +
                                " bytes; chain needs " + std::to_string(need));
  for (unsigned k = 0; k < cfg.bits_.size(); ++k)
    cfg.bits_[k] = (p.payload[k / 8] >> (k % 8)) & 1;
  return cfg;
}

}  // namespace nail::scan

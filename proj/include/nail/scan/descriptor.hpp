// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "nail/common.hpp"

namespace nail::scan {

enum class ComponentKind { Conditioner, StuckAt, LfsrFlip, CycleWindow };

const char* component_kind_name(ComponentKind kind);
ComponentKind component_kind_from_name(const std::string& name);

struct FieldDesc {
  std::string name;
  unsigned width = 0;
  unsigned offset = 0;  // bit index from chain start

  bool operator==(const FieldDesc&) const = default;
};

struct ComponentEntry {
  std::string componentId;
  ComponentKind kind = ComponentKind::StuckAt;
  std::vector<FieldDesc> fields;

  unsigned width() const;

  bool operator==(const ComponentEntry&) const = default;
};

// Entry 0 sits nearest scan_out; its first field starts at offset 0. Offsets
// run contiguously through entries and fields in order.
struct ScanChainDescriptor {
  std::string chainId;
  std::vector<ComponentEntry> entries;
  unsigned totalWidth = 0;

  const ComponentEntry* find_component(const std::string& componentId) const;
  const FieldDesc* find_field(const std::string& componentId,
                              const std::string& fieldName) const;

  bool operator==(const ScanChainDescriptor&) const = default;
};

// Recomputes contiguous offsets and totalWidth from entry/field order.
void assign_offsets(ScanChainDescriptor& d);

// Structural checks: nonempty names, widths in range, unique componentIds,
// offsets contiguous from 0, totalWidth consistent.
void check_descriptor(const ScanChainDescriptor& d);

std::string descriptor_to_json(const ScanChainDescriptor& d);
ScanChainDescriptor descriptor_from_json(const std::string& text);

}  // namespace nail::scan

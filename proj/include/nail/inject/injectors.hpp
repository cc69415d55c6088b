// SPDX-License-Identifier: Apache-2.0
//
// Fault injector kinds, their scan field layouts, and a cycle-accurate
// software reference for each kind. The reference mirrors the generated
// hardware exactly: the simulator tests drive both and compare.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nail/common.hpp"

namespace nail::inject {

enum class InjectorKind { StuckAt, LfsrFlip, CycleWindow };

const char* injector_kind_name(InjectorKind kind);
InjectorKind injector_kind_from_name(const std::string& name);

struct FieldSpec {
  std::string name;
  unsigned width = 0;
};

// Scan fields in chain order for an injector over a targetWidth-bit signal.
// isActive always comes first.
std::vector<FieldSpec> injector_fields(InjectorKind kind, unsigned targetWidth);

// Fibonacci LFSR, right-shifting, feedback into the top bit. Taps use the
// classic 1-based numbering counted from the output end: tap t reads bit
// width-t, so the tap list equals the feedback polynomial exponents. State
// must be nonzero.
Value lfsr_step(Value state, unsigned width, std::span<const unsigned> taps);

// The 32-bit flavour baked into lfsrFlip hardware: taps 32, 22, 2, 1.
std::uint32_t lfsr32_next(std::uint32_t state);

inline Value stuck_at(Value orig, Value mask, Value stuckValue, unsigned width) {
  return ((orig & ~mask) | (stuckValue & mask)) & mask_of(width);
}

inline Value flip_bits(Value orig, Value mask, unsigned width) {
  return (orig ^ mask) & mask_of(width);
}

// Software twin of one injector instance. step() takes the pre-fault value,
// the data-path select for this cycle (enable buffer AND isActive) and the
// raw global enable, returns the post-fault value, then commits state the
// way the hardware does at the clock edge.
struct InjectorRef {
  InjectorKind kind = InjectorKind::StuckAt;
  unsigned width = 1;

  Value mask = 0;
  Value stuckValue = 0;
  std::uint32_t seed = 1;
  std::uint32_t threshold = 0;
  std::uint32_t startCycle = 0;
  std::uint32_t duration = 0;

  std::uint32_t lfsr = 0;
  std::uint32_t counter = 0;
  bool gePrev = false;

  void reset();
  Value step(Value orig, bool sel, bool globalEn);
};

}  // namespace nail::inject
